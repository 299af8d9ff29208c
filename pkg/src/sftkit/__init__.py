"""sftkit: subshifts of finite type, Wang tilesets, sliding block codes and
budgeted verifiers for conjugacy, factor maps and emptiness."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    STAR, Alphabet, Pattern, PeriodicConfig, Projection, ProjectedPattern, SftInputError, SftSpec,
    Verdict, WangTileset, Proven, Refuted, Unknown,
)
from .blocks import (  # noqa: E402
    check_extensibility, enumerate_admissible_blocks, is_admissible, normalize_to_radius,
    sft_to_wang, wang_to_sft,
)
from .codes import (  # noqa: E402
    SlidingBlockCode, TableCode, ProjectionCode, apply_to_pattern, apply_to_torus, compose, star_augment,
)
from .verify import (  # noqa: E402
    ConjugacyCertificate, check_factor_inclusion, check_surjectivity, prove_empty, prove_nonempty,
    search_conjugacy, verify_conjugacy_certificate,
)
from .entropy import count_admissible_blocks_sided, entropy_upper_bound  # noqa: E402
from .tm import TuringMachine, run  # noqa: E402
