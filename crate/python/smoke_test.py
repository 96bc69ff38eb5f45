#!/usr/bin/env python3
"""Smoke test for the restrix_py extension module.

Builds the cdylib with cargo if needed, loads it, and checks the headline
numbers of the toolkit: Newton distance, height, critical exponent, the
Gamma inequality, and a surface-measure Fourier value.

Usage: python3 python/smoke_test.py [--release]
"""

import importlib.util
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build_and_load(release: bool):
    profile = "release" if release else "debug"
    cmd = ["cargo", "build", "-p", "restrix-py"] + (["--release"] if release else [])
    subprocess.run(cmd, cwd=ROOT, check=True)
    lib = ROOT / "target" / profile / "librestrix_py.so"
    if not lib.exists():  # macOS fallback
        lib = ROOT / "target" / profile / "librestrix_py.dylib"
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="restrix_py_"))
    target = tmp / "restrix_py.so"
    shutil.copy2(lib, target)
    spec = importlib.util.spec_from_file_location("restrix_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    release = "--release" in sys.argv
    rx = build_and_load(release)
    checks = 0

    def check(name, cond, detail=""):
        nonlocal checks
        checks += 1
        status = "ok" if cond else "FAIL"
        print(f"[{status}] {name} {detail}")
        if not cond:
            sys.exit(1)

    p = rx.Polynomial("x1^2 + x2^2 + x3^2")
    check("evaluate", p.evaluate([1.0, 1.0, 1.0]) == 3.0)
    check("gradient", p.gradient() == ["2*x1", "2*x2", "2*x3"], str(p.gradient()))
    q = p.compose([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    check("compose swap", str(q) == str(p), str(q))

    np3 = rx.newton_polyhedron("x1^2 + x2^2 + x3^2")
    check("newton distance", np3["distance"] == "2/3", np3["distance"])
    check("newton oracle", rx.distance_oracle("x1^2 + x2^2 + x3^2") == "2/3")
    np4 = rx.newton_polyhedron("x1^2 + x2^2 + x3^4")
    check("quartic distance", np4["distance"] == "4/5", np4["distance"])

    h = rx.height("x1^2 + x2^2 + x3^4", starts=8, iters=8, seed=1)
    check("height", h["h"] == "4/5" and h["certified"], str(h["h"]))

    exps = rx.critical_p("2/3")
    check("p_star", exps["p_star"] == "10/7", exps["p_star"])
    check("q_star", exps["q_star"] == "10/3")
    check("greenleaf", rx.greenleaf_p("3/2", 1) == "10/7")
    check("dual", rx.dual_exponent("10/7") == "10/3")
    check("knapp crossing", rx.critical_p_of_distance("2/3") == "10/7")
    check("knapp exponent at p*", rx.knapp_predicted_exponent("2/3", "10/7") == "0")

    max_ratio, argmax = rx.gamma_bound_check(50.0, 1001)
    check("gamma bound", max_ratio <= 1.0 + 1e-14 and argmax == 0.0, f"max={max_ratio}")

    re0, im0 = rx.fourier_surface_measure("x1^2 + x2^2 + x3^2", [0.0, 0.0, 0.0, 0.0])
    check("J(0) real positive", re0 > 0.1 and abs(im0) < 1e-12, f"J(0)={re0}")
    re1, im1 = rx.fourier_surface_measure("x1^2 + x2^2 + x3^2", [0.0, 0.0, 0.0, 24.0])
    re2, im2 = rx.fourier_surface_measure("x1^2 + x2^2 + x3^2", [0.0, 0.0, 0.0, -24.0])
    check("conjugate symmetry", abs(re1 - re2) < 1e-12 and abs(im1 + im2) < 1e-12)

    convex, _ = rx.check_convex("x1^2 + x2^2 + x3^2")
    check("convexity", convex)
    indefinite, witness = rx.check_convex("x1^2 - x2^2 + x3^2")
    check("indefinite detected", not indefinite and witness is not None)

    print(f"all {checks} smoke checks passed")


if __name__ == "__main__":
    main()
