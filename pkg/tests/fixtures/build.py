"""Regenerate the JSON fixtures in this directory: ``python tests/fixtures/build.py``."""

from pathlib import Path

import numpy as np

from gptd import io
from gptd.cones import SWAP
from gptd.discrimination import A3_M0, A3_M1, A3_RHO0, A3_RHO1

HERE = Path(__file__).parent


def write(name, data):
    (HERE / name).write_text(io.dumps_report({"format_version": io.FORMAT_VERSION, **data}))


def generators(mats):
    return {"type": "generators", "generators": [io.matrix_to_json(m) for m in mats]}


def main():
    write("sep_model.json", {"dim": 4, "cone": {"type": "sep22"}})
    write("psd2_model.json", {"dim": 2, "cone": {"type": "psd"}})
    write("psd3_model.json", {"dim": 3, "cone": {"type": "psd"}})
    write("a3_instance.json", {"rho0": io.matrix_to_json(A3_RHO0), "rho1": io.matrix_to_json(A3_RHO1), "p": 0.5})
    write("a3_meas.json", {"effects": [io.matrix_to_json(A3_M0), io.matrix_to_json(A3_M1)]})
    write("a3_states.json", {"states": [io.matrix_to_json(A3_RHO0), io.matrix_to_json(A3_RHO1)]})
    singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
    write("entangled_state.json", {"states": [io.matrix_to_json(A3_RHO1), io.matrix_to_json(np.outer(singlet, singlet))]})
    write("bad_meas_psd2.json", {"effects": [io.matrix_to_json(2 * np.eye(2)), io.matrix_to_json(-np.eye(2))]})
    write("projective_meas_psd2.json", {"effects": [io.matrix_to_json(np.diag([1.0, 0.0])), io.matrix_to_json(np.diag([0.0, 1.0]))]})
    write("qubit_instance.json", {"rho0": io.matrix_to_json(np.diag([0.9, 0.1])), "rho1": io.matrix_to_json(np.diag([0.1, 0.9])), "p": 0.5})
    # spread r = 1 + 2e-9: a certificate exists but its margin is below the verification threshold at small safety
    alpha = (1 + 2e-9) / 2
    m0 = alpha * SWAP + 0.25 * np.eye(4)
    write("near_threshold_meas.json", {"effects": [io.matrix_to_json(m0), io.matrix_to_json(np.eye(4) - m0)]})
    # diagonal subcone of PSD(2): no interior point
    degenerate = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    write("degenerate_model.json", {"dim": 2, "cone": generators(degenerate)})
    m0 = np.array([[0.5, 1.0], [1.0, 0.5]])
    write("degenerate_meas.json", {"effects": [io.matrix_to_json(m0), io.matrix_to_json(np.eye(2) - m0)]})
    octa = [0.5 * (np.eye(2) + s * 0.2 * p) for p in (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])) for s in (1, -1)]
    write("octahedron_model.json", {"dim": 2, "cone": generators(octa)})
    write("simplex_abstract_model.json", {"abstract": {"dim_v": 4, "generators": np.eye(4).tolist(), "unit": [1.0, 1.0, 1.0, 1.0]}})
    write("abstract3_model.json", {"abstract": {"dim_v": 3, "generators": np.eye(3).tolist(), "unit": [1.0, 1.0, 1.0]}})
    full = (HERE / "sep_model.json").read_text()
    (HERE / "truncated_model.json").write_text(full[: len(full) // 2])


if __name__ == "__main__":
    main()
