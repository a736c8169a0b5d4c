"""Record gaps between primes in arithmetic progressions.

Sieve primes along r + k*q, track record (maximal) gaps, audit conjectured
growth bounds, and characterize the distribution of the n-th record across
residues.
"""

__version__ = "0.1.0"

from .arith import (  # noqa: F401
    coprime_residues,
    gumbel_skewness_constant,
    log_integral,
    mod_inverse,
    totient,
)
from .bounds import (  # noqa: F401
    PHI_LOG2Q,
    Q_LOG2Q,
    BoundException,
    BoundReport,
    audit_bounds,
    bound_value,
    classic_reality_check,
)
from .fit import (  # noqa: F401
    fit_gumbel,
    fit_lognormal,
    fit_power_law,
    fit_quadratic,
    fit_tau_model,
)
from .iid import (  # noqa: F401
    IidRunConfig,
    expected_iid_records,
    simulate_record_counts,
)
from .records import (  # noqa: F401
    Ensemble,
    RecordEvent,
    RecordSet,
    build_ensemble,
    count_records_below,
    ensemble_median,
    extract_records,
    mean_record_count_increment,
    scan_modulus,
)
from .sieve import Progression, SieveConfig, stream_progression_primes  # noqa: F401
from .stats import histogram, skewness, summarize  # noqa: F401
from .store import (  # noqa: F401
    RecordCache,
    cache_from_record_sets,
    export_csv,
    load_cache,
    merge_caches,
    record_sets_from_cache,
    save_cache,
)
