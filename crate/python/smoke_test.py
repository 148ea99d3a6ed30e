"""Smoke test of the Python bindings.

Build the extension first:

    cargo build -p cylwave-py --release --features extension-module

then run `python3 python/smoke_test.py`. If `cylwave` is not importable
(e.g. not installed with maturin), the freshly built shared library in
target/release is loaded directly.
"""

import cmath
import importlib.machinery
import importlib.util
import json
import math
import pathlib
import sys
import tempfile


def load():
    try:
        import cylwave  # noqa: F401

        return cylwave
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libcylwave.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("cylwave", str(lib))
            spec = importlib.util.spec_from_loader("cylwave", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("cylwave extension not found; build it with --features extension-module")


def validate_summary(summary):
    """Check the summary against the documented schema, when jsonschema is installed."""
    try:
        import jsonschema
    except ImportError:
        return
    root = pathlib.Path(__file__).resolve().parent.parent
    schema = json.loads((root / "docs" / "summary.schema.json").read_text())
    jsonschema.validate(summary, schema)


def close(a, b, tol):
    return abs(a - b) <= tol * max(abs(b), 1e-300)


def main():
    cw = load()

    # Airy connection A = e^{iπ/3}A₊ + e^{−iπ/3}A₋ and J_0(1).
    a, ap, am, *_ = cw.airy_all(complex(-1.5, 0.0))
    comb = cmath.exp(1j * math.pi / 3) * ap + cmath.exp(-1j * math.pi / 3) * am
    assert abs(comb - a) < 1e-12 * max(abs(a), abs(ap)), (comb, a)
    assert close(cw.bessel_j(0, 1.0), 0.7651976865579666, 1e-14)
    assert close(cw.hankel_h1(3, 7.0).real, cw.bessel_j(3, 7.0), 1e-14)

    value, regime, _ = cw.hankel_uniform(100, 1.5)
    exact = cw.hankel_h1(100, 150.0)
    assert abs(value - exact) < 1e-3 * abs(exact), regime
    assert cw.zeta_tilde(1.0) == 0.0

    # Γ₀(1, s) = √(s²−1) + arcsin(1/s).
    assert close(cw.gamma0(1.0, 2.0), math.sqrt(3.0) + math.asin(0.5), 1e-12)
    r1, r2 = cw.eikonal_residual(0.2, 0.3, 0.1, 1.0, 0.2)
    assert abs(r1) < 1e-6 and abs(r2) < 1e-6
    assert len(cw.find_critical_points((2.0, math.pi, 0.0), 2.0)) >= 1

    # Dirichlet trace and the free resolvent.
    assert abs(cw.resolvent((1.0, 0.7, 0.2), 2.0, 5.0)) < 1e-8
    d = cw.dist((3.0, 0.0, 0.0), 2.0)
    assert close(cw.free_resolvent((3.0, 0.0, 0.0), 2.0, 4.0), cmath.exp(4j * d) / (4 * math.pi * d), 1e-14)

    # Single-layer identity for the band-limited kernel.
    w = cw.FreqWindow.high(0.125)
    q, t = (3.0, 0.3, 0.5), 3.1
    u = cw.wave_kernel(q, 2.0, t, w)
    u_free = cw.free_wave_kernel(q, 2.0, t, w)
    u_layer = cw.kirchhoff_single_layer(q, 2.0, t, w)
    assert abs(u_free - u_layer - u) < 0.05 * abs(u), (u, u_free, u_layer)

    rows = cw.dispersion_scan([0.25], [0.5, 1.0], model="free", search=(4, 4, 4))
    assert len(rows) == 2 and all(math.isfinite(r["ratio"]) for r in rows)

    # Runner: a passing suite, then a schema error.
    with tempfile.TemporaryDirectory() as out:
        code, summary = cw.run("parametrix-verify", out)
        summary = json.loads(summary)
        assert code == 0 and summary["n_fail"] == 0, summary
        validate_summary(summary)
        assert (pathlib.Path(out) / "checks.csv").exists()
        code, err = cw.run('command = "dispersion-scan"\n[params]\nh = []\n', out)
        assert code == 2 and "empty" in json.loads(err)["error"], err

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
