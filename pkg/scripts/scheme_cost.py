"""Required series length N versus eps for one-factor and desk models.

    python3 scripts/scheme_cost.py

With a single nonzero eigenvalue the decay exponent is beta = 1/2, so N
grows like eps^-2; the desk book has beta up to 15 and N grows slowly.
"""
import math

from dgvar.bounds import decay_params, tail_params_for
from dgvar.charfn import CharFnNormal
from dgvar.fourier import DEFAULT_MAX_TERMS, scheme_size
from dgvar.portfolio import desk_model
from dgvar.spectral import DeltaGammaModel, spectral_transform
from dgvar.var import tail_range

MODELS = {
    "chi2_1 (lam=2, b=0)": DeltaGammaModel([[1.0]], [0.0], [[2.0]]),
    "ncx2_1 (lam=2, b=1)": DeltaGammaModel([[1.0]], [1.0], [[2.0]]),
    "chi2_2 (lam=2,2)": DeltaGammaModel([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0],
                                        [[2.0, 0.0], [0.0, 2.0]]),
    "desk book, seed 0": desk_model(0),
}


def main():
    print(f"cap = {DEFAULT_MAX_TERMS}")
    for name, model in MODELS.items():
        spec = spectral_transform(model)
        cf = CharFnNormal(spec)
        print(name)
        for eps in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
            tail = tail_params_for(cf, eps)
            decay = decay_params(spec.lam, eps)
            _, t, n = scheme_size(tail, decay, tail_range(tail, eps), eps)
            flag = "" if n <= DEFAULT_MAX_TERMS else "  > cap"
            print(f"  eps={eps:.0e}  beta={decay.beta:<4g}  T={t:9.3g}  N={math.ceil(n):.3e}{flag}")


if __name__ == "__main__":
    main()
