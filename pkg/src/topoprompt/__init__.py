"""Topologically significant point prompts for promptable image segmenters.

Instead of probing an image with a fixed grid or random points, the
persistence of each local maximum is used to rank candidate locations, so a
small prompt budget concentrates on the structures that matter. The package
also ships the synthetic oval benchmark and grid/random baselines used to
compare the approaches.
"""

from .errors import (
    BudgetExceedsPixelsError,
    DecodeError,
    DimensionMismatchError,
    EmptyImageError,
    PlacementFailureError,
    SchemaError,
    TopopromptError,
    UnsupportedFormatError,
)
from .evaluation import (
    BenchReport,
    BenchRow,
    GeneratorSpec,
    OracleMask,
    benchmark,
    default_generator_specs,
    default_threshold,
    detection_accuracy,
    hit_rate,
    oracle_segment,
    quality,
)
from .persistence import (
    KERNEL_BACKEND,
    PersistenceDiagram,
    PersistencePair,
    compute_diagram,
    diagram_to_csv,
    filter_by_persistence,
    top_k,
)
from .prompts import (
    DEFAULT_MIN_PERSISTENCE,
    PromptPoint,
    PromptSet,
    export_prompts,
    grid_prompts,
    import_prompts,
    random_prompts,
    tda_prompts,
)
from .scalar_field import (
    ScalarImage,
    gaussian_smooth,
    invert,
    load_image,
    normalize,
)
from .synth import (
    Oval,
    SceneConfig,
    SyntheticScene,
    dataset,
    generate_scene,
    load_scene,
    save_scene,
)

__version__ = "0.1.0"
