"""Regenerate the dilation round-trip fixture matrices.

Run from the repository root:  python3 scripts/make_fixtures.py
Deterministic: fixed seeds, repr-stable JSON floats.
"""

import json
import os

import numpy as np

from zenon.linalg import matrix_to_json

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures", "roundtrip")


def random_complex(rng, dim):
    return rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))


def build_fixtures():
    fixtures = {}

    # PT-symmetric 2x2: real symmetric coupling with balanced gain/loss.
    a, b = 0.5, 1.0
    fixtures["pt_symmetric_2x2"] = np.array([[1j * a, b], [b, -1j * a]])

    # Pseudo-Hermitian 2x2 (real spectrum under the metric diag(4, 1)).
    fixtures["pseudo_hermitian_2x2"] = np.array([[0.0, 1.0], [4.0, 0.0]], dtype=complex)

    # Non-diagonalizable Jordan block.
    fixtures["jordan_block_2x2"] = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

    # Single decaying level, rate 0.8.
    fixtures["decaying_level_2x2"] = np.array([[0.0, 0.0], [0.0, -0.4j]])

    # Hermitian input: dilation couples nothing (needs an explicit tau).
    fixtures["hermitian_2x2"] = np.array([[0.3, 1.0], [1.0, -0.3]], dtype=complex)

    # PT-symmetric 4x4 as a tensor square of two PT blocks.
    pt1 = np.array([[0.3j, 1.0], [1.0, -0.3j]])
    pt2 = np.array([[0.6j, 1.2], [1.2, -0.6j]])
    fixtures["pt_symmetric_4x4"] = np.kron(pt1, pt2)

    # Pseudo-Hermitian 4x4: pseudo-Hermitian block times a Hermitian one.
    herm = np.array([[1.0, 0.2], [0.2, 2.0]], dtype=complex)
    fixtures["pseudo_hermitian_4x4"] = np.kron(fixtures["pseudo_hermitian_2x2"], herm)

    fixtures["random_4x4"] = random_complex(np.random.Generator(np.random.PCG64(11)), 4)
    fixtures["random_3x3"] = random_complex(np.random.Generator(np.random.PCG64(12)), 3)
    fixtures["random_8x8"] = random_complex(np.random.Generator(np.random.PCG64(13)), 8)
    return fixtures


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    for name, matrix in build_fixtures().items():
        path = os.path.join(OUT_DIR, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(matrix_to_json(matrix), fh, indent=2)
            fh.write("\n")
        print("wrote", os.path.normpath(path))


if __name__ == "__main__":
    main()
