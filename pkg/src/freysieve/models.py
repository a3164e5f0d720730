"""Builders for the two shipped curve models.

Both come from the classical factorization a^13 + b^13 = (a+b) prod f_k with
f_k(a, b) = a^2 + (zeta^k + zeta^-k) ab + b^2, k = 1..6:

* model E (real quadratic subfield): 2-torsion values r_i f_{k_i} on the
  sigma_4-orbit {1, 3, 4}, using the linear relation
  (w3-w4) f1 + (w4-w1) f3 + (w1-w3) f4 = 0; the root set is only
  Galois-stable up to a common shift, so the roots are recentred (and
  scaled by 3 to stay integral), after which the symmetric functions are
  fixed by sigma_4 and the model descends.  disc ~ (f1 f3 f4)^2.

* model F (real cubic subfield): y^2 = x (x - c5 f1)(x - c1 f5) with
  c_k = w_k - 2 on the sigma_5-orbit {1, 5}; the coefficients are already
  sigma_5-symmetric.  disc ~ (a+b)^4 (f1 f5)^2, so pairs with q | a+b
  reduce multiplicatively at every prime above q away from {2, 13}.

The package ships the generated files under freysieve/data/; regenerate
with `python -m freysieve.models <outdir>`.
"""

from __future__ import annotations

import sys
from importlib import resources

from .bipoly import BiPoly
from .cyclotomic import CUBIC, QUADRATIC, CyclotomicInt
from .freycurves import FreyCurveModel, load_curve_model


def _omega(k):
    return CyclotomicInt.zeta_power(k) + CyclotomicInt.zeta_power(13 - k)


def _f_form(k):
    return BiPoly({(2, 0): CyclotomicInt.from_int(1), (1, 1): _omega(k), (0, 2): CyclotomicInt.from_int(1)})


def build_model_e():
    w1, w3, w4 = _omega(1), _omega(3), _omega(4)
    top = (w3 - w4) * _f_form(1)
    bot = -((w1 - w3) * _f_form(4))
    roots = [BiPoly.zero(), top, bot]
    total = roots[0] + roots[1] + roots[2]
    centred = [9 * r - 3 * total for r in roots]
    a4 = centred[0] * centred[1] + centred[0] * centred[2] + centred[1] * centred[2]
    a6 = -(centred[0] * centred[1] * centred[2])
    return FreyCurveModel("E", QUADRATIC, {4: a4, 6: a6})


def build_model_f():
    c1 = _omega(1) - 2
    c5 = _omega(5) - 2
    f1, f5 = _f_form(1), _f_form(5)
    a2 = -(c5 * f1 + c1 * f5)
    a4 = (c1 * c5) * (f1 * f5)
    return FreyCurveModel("F", CUBIC, {2: a2, 4: a4})


def default_model_path(name):
    """Path of a packaged model file ("E" or "F")."""
    return resources.files("freysieve").joinpath(f"data/curve_{name}.model")


def load_default_model(name):
    with resources.as_file(default_model_path(name)) as p:
        return load_curve_model(p)


def main(argv=None):
    outdir = (argv or sys.argv[1:] or ["."])[0]
    for model in (build_model_e(), build_model_f()):
        path = f"{outdir}/curve_{model.name}.model"
        model.save(path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
