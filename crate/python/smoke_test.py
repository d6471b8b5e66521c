# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the nvscramble_py extension.

Builds the cdylib with cargo, copies it next to a temp import path and
exercises the main entry points.
"""

import cmath
import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "nvscramble-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = os.path.join(ROOT, "target", "release", "libnvscramble_py.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "nvscramble_py.so"))
    sys.path.insert(0, tmp)
    import nvscramble_py

    return nvscramble_py


def main():
    nv = load()

    names = [n for n, _ in nv.presets()]
    assert "fig2" in names and "fig8" in names, names

    spin = nv.SpinParams(omega0=2.0, g=0.5, alpha=math.pi / 3)
    osc = nv.OscParams(1.0, 1.5, K=0.1)
    assert abs(osc.connectivity() - 0.1) < 1e-12
    assert osc.regime() == "autonomous-linear", osc.regime()

    run = nv.integrate(osc, spin, 5.0, dt_out=0.1, state="01")
    cols = run["columns"]
    assert len(cols["t"]) == 51
    assert max(abs(c) for c in cols["otoc"]) < 1e-8
    assert run["diagnostics"]["max_unitarity_defect"] < 1e-8

    ch = nv.ChannelParams(3.0, 2.0, 1.0, 10.0, beta=1.0)
    energies = [e for e, _ in nv.eigensystem(ch)]
    x = ch.coupling0 + ch.zeeman_r
    expected = [x * 2, ch.coupling_n, -ch.coupling_n, -2 * x]
    assert all(abs(a - b) < 1e-12 for a, b in zip(energies, expected)), energies

    t = 0.3
    numeric = nv.otoc_numeric(ch, t)
    assert abs(numeric - (1 - math.cos(4 * ch.coupling_n * t))) < 1e-10

    closed, trace = nv.thermal_otoc(ch, t)
    assert abs(closed - trace) < 1e-10
    closed, wootters = nv.thermal_concurrence(ch, t)
    assert abs(closed - wootters) < 1e-10

    s = 1 / math.sqrt(2)
    z = [[0j] * 4 for _ in range(4)]
    for i in (0, 3):
        for j in (0, 3):
            z[i][j] = complex(0.5 if i == j else -0.5)
    assert abs(nv.concurrence(z) - 1.0) < 1e-12
    assert abs(nv.gme(1.0) - 0.5) < 1e-12

    ident = [[complex(i == j) for j in range(4)] for i in range(4)]
    f, c = nv.otoc_product(ident, "phi-minus")
    assert abs(f - 1) < 1e-14 and abs(c) < 1e-14
    tp = nv.two_point(ident, [s, 0, 0, -s])
    assert abs(tp - nv.two_point(ident, [s * cmath.exp(0.7j), 0, 0, -s * cmath.exp(0.7j)])) < 1e-14

    out = nv.run_scenario("fig8")
    assert out["diagnostics"] is None and len(out["columns"]["n"]) > 0

    try:
        nv.OscParams(1.0, 1.5, K=0.1, D=0.2)
    except ValueError:
        pass
    else:
        raise AssertionError("K and D together must raise")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
