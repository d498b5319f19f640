"""patternc: garment configuration compiler.

Turns compact JSON garment configs into validated 2D sewing patterns
(panels, stitches, SVG), with config pruning/normalization, a fixed
76-float parameter codec, a deterministic sampling pipeline, rule-based
simulation material parameters, and pattern-comparison metrics.
"""

from .body import BodyModel, DEFAULT_BODY
from .registry import FieldRegistry, default_registry, load_registry
from .config import (
    GarmentConfig,
    OutfitConfig,
    parse_config,
    parse_outfit,
    prune_config,
    validate_config,
    normalize_config,
    denormalize_config,
    canonical_serialize,
    token_count,
    token_ratio,
)
from .assembler import (
    Pattern,
    Stitch,
    assemble_garment,
    assemble_outfit,
    check_pattern,
    compile_garment,
    export_svg,
    parse_pattern,
    serialize_pattern,
)
from .codec import (
    LossConfig,
    make_skeleton,
    encode_vector,
    decode_merge,
    masked_l1,
    numeric_loss,
    serialize_vector,
    parse_vector,
)
from .sampler import (
    DatasetManifest,
    EditRecord,
    SamplingWeights,
    default_weights,
    load_weights,
    make_edit_pair,
    run_pipeline,
    sample_config,
    stable_hash,
)
from .simparams import (
    AlphaCoeffs,
    DescriptorScores,
    MaterialParams,
    lookup_base,
    map_material,
    map_scores,
    material_names,
)
from .metrics import (
    MetricReport,
    pattern_chamfer,
    pattern_fscore,
)

__version__ = "0.1.0"

__all__ = [
    "BodyModel", "DEFAULT_BODY",
    "FieldRegistry", "default_registry", "load_registry",
    "GarmentConfig", "OutfitConfig",
    "parse_config", "parse_outfit", "prune_config", "validate_config",
    "normalize_config", "denormalize_config", "canonical_serialize",
    "token_count", "token_ratio",
    "Pattern", "Stitch", "assemble_garment", "assemble_outfit",
    "check_pattern", "compile_garment", "export_svg",
    "parse_pattern", "serialize_pattern",
    "LossConfig", "make_skeleton", "encode_vector", "decode_merge",
    "masked_l1", "numeric_loss", "serialize_vector", "parse_vector",
    "DatasetManifest", "EditRecord", "SamplingWeights",
    "default_weights", "load_weights", "make_edit_pair",
    "run_pipeline", "sample_config", "stable_hash",
    "AlphaCoeffs", "DescriptorScores", "MaterialParams",
    "lookup_base", "map_material", "map_scores", "material_names",
    "MetricReport", "pattern_chamfer", "pattern_fscore",
    "__version__",
]
