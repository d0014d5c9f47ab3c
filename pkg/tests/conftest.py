# Shared fixtures: the embedded insulation data and synthetic life-data
# factories used by the fitting and acceptance tests.

import numpy as np
import pytest

from altkit import (
    Censoring,
    LifeRecord,
    SyntheticGenerator,
    generate,
    load_gab,
    parse_model,
)


@pytest.fixture(scope="session")
def gab():
    return load_gab()


@pytest.fixture(scope="session")
def arrhenius_population():
    """Factory for Arrhenius-lognormal samples with fraction censoring.

    mu(temp) = beta0 + ea * 11605 / tempK on three elevated temperatures,
    which is the `mu ~ arrh(temp)` design; returns (records, spec, truth).
    """

    def make(seed, n_total=500, censored_fraction=0.30, sigma=0.6,
             beta0=-10.0, ea=0.75, temps=(120.0, 100.0, 80.0)):
        base, extra = divmod(n_total, len(temps))
        counts = [base + (1 if i < extra else 0) for i in range(len(temps))]
        spec = parse_model("lognormal: mu ~ arrh(temp)")
        gen = SyntheticGenerator(
            seed=seed,
            spec=spec,
            mu_params=(beta0, ea),
            sigma=sigma,
            plan=tuple(({"temp_C": t}, c) for t, c in zip(temps, counts)),
            censoring=Censoring("fraction", censored_fraction),
        )
        return generate(gen), spec, {"beta0": beta0, "ea": ea, "sigma": sigma}

    return make


@pytest.fixture()
def small_lognormal_sample():
    """Twenty failures and five censored records at a single condition."""
    rng = np.random.default_rng(42)
    times = np.exp(2.0 + 0.5 * rng.standard_normal(25))
    cutoff = float(np.quantile(times, 0.8))
    recs = [
        LifeRecord(min(float(t), cutoff),
                   "failed" if t <= cutoff else "censored",
                   {"volt": 100.0})
        for t in times
    ]
    return recs
