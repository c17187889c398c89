#!/usr/bin/env python3
"""Materialize the benchmark CSVs in UCI layout for local runs.

Iris and Wine ship with scikit-learn (verbatim copies of the UCI files), so
they can be produced offline. Dermatology has no offline source; download
dermatology.data from the UCI repository and place it in the target directory
yourself. The script always exits 0 so it can run as a best-effort fixture.
"""
import os
import sys


def main() -> int:
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "data"
    os.makedirs(out_dir, exist_ok=True)
    try:
        from sklearn import datasets
    except ImportError:
        print("scikit-learn unavailable; supply iris.csv and wine.csv manually")
        return 0

    iris = datasets.load_iris()
    iris_names = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"]
    with open(os.path.join(out_dir, "iris.csv"), "w") as f:
        for row, target in zip(iris.data, iris.target):
            f.write(",".join(f"{v:g}" for v in row))
            f.write(f",{iris_names[target]}\n")
    print(f"wrote {out_dir}/iris.csv")

    wine = datasets.load_wine()
    with open(os.path.join(out_dir, "wine.csv"), "w") as f:
        for row, target in zip(wine.data, wine.target):
            f.write(f"{target + 1},")
            f.write(",".join(f"{v:g}" for v in row))
            f.write("\n")
    print(f"wrote {out_dir}/wine.csv")

    derm = os.path.join(out_dir, "dermatology.csv")
    if not os.path.exists(derm):
        print(f"{derm} not present; download dermatology.data from the UCI "
              "repository and copy it there to enable the dermatology checks")
    return 0


if __name__ == "__main__":
    sys.exit(main())
