"""Smoke test for the paradiff_py extension.

Loads the module from the cargo build output, so `cargo build -p paradiff-py`
is enough; a maturin-installed module is used when present.
"""

import cmath
import importlib.util
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import paradiff_py

        return paradiff_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libparadiff_py.so"
        if lib.exists():
            dst = pathlib.Path(tempfile.mkdtemp()) / "paradiff_py.so"
            shutil.copy(lib, dst)
            spec = importlib.util.spec_from_file_location("paradiff_py", dst)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("paradiff_py not built: run `cargo build -p paradiff-py`")


def main():
    pd = load()
    g = pd.Grid(64)
    assert g.n == 64 and abs(g.dx - 2 * math.pi / 64) < 1e-15

    mode = pd.Field.from_complex(g, [cmath.exp(3j * x) for x in g.points()])
    assert abs(mode.sobolev_norm(0.5) - 10 ** 0.25) < 1e-12
    assert abs(mode.log_sobolev_norm(0.0, 1.0, 1.0) - math.log(5.0)) < 1e-12

    u = pd.Field.random(g, seed=3, decay=1.0)
    total = u.lp_decompose()[0]
    for b in u.lp_decompose()[1:]:
        total = total.add(b)
    assert total.sub(u).norm_inf() < 1e-12 * u.norm_inf()

    assert pd.zygmund_seminorm([2.0] * 64, g.dx) == 0.0

    lam = pd.Symbol.lambda_power(g, 2.0, 0.5).quantize()
    out = lam.apply(mode)
    assert out.sub(mode.scale(complex(13 ** 0.25))).norm_inf() < 1e-12
    lhs = lam.apply(u).inner(mode)
    rhs = u.inner(lam.adjoint().apply(mode))
    assert abs(lhs - rhs) < 1e-12

    big = pd.Grid(1024)
    fit = pd.Symbol.lambda_power(big, 1.0, 1.0).quantize().order_fit()
    assert abs(fit["m"] - 1.0) < 0.05, fit

    a = pd.Coefficient.constant(g, 1.0)
    traj = pd.solve(a, mode, pd.Field.from_real(g, [0.0] * 64), 1.0, dt=1e-3)
    want = mode.scale(complex(math.cos(3.0)))
    assert traj.u(len(traj) - 1).sub(want).norm_inf() < 1e-6
    assert traj.gronwall_lambda is not None

    w = pd.Coefficient.weierstrass(g, 3, 1)
    assert all(1.0 <= v <= 2.0 for v in w.row(0))

    rep = pd.run_suite("lp-suite", config='experiment = "lp-suite"\ntrials = 3\n')
    assert rep["passed"], rep["text"]
    assert "lp-suite" in pd.suites()

    try:
        pd.Grid(17)
    except ValueError:
        pass
    else:
        raise AssertionError("odd grid accepted")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
