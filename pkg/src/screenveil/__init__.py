"""screenveil: shoulder-surfing protection for screen content.

Protects what is on screen from onlookers a few feet away while staying
readable to the user in front of it. The core trick: on a fine checkerboard,
replace half the pixels so that each (kept, replaced) pair averages, in the
RMS sense a pooling eye applies, to a degraded target (blurred, pixelated,
contrast-flattened). Up close the eye resolves the kept pixels; at distance
it sees only the target.
"""

from .geometry import DisplaySpec, ViewingGeometry, angular_diameter, downscale_factor, optimal_grid_size
from .grid import GridMask, generate_grid
from .imagecore import FormatError, ImageBuffer, load_image, save_image
from .metrics import (
    MockRecognitionClient,
    RecognitionResult,
    RetentionReport,
    SsimParams,
    label_retention,
    recognize,
    ssim,
)
from .shield import (
    PRESETS,
    ProtectParams,
    preset_params,
    protect,
    protect_with_params,
)
from .simulate import ViewSimSpec, downscale_view, simulate_surfer
from .target import TargetSpec, adjust_contrast, gaussian_blur, pixelate, render_target

__version__ = "0.1.0"

__all__ = [
    "DisplaySpec",
    "FormatError",
    "GridMask",
    "ImageBuffer",
    "MockRecognitionClient",
    "PRESETS",
    "ProtectParams",
    "RecognitionResult",
    "RetentionReport",
    "SsimParams",
    "TargetSpec",
    "ViewSimSpec",
    "ViewingGeometry",
    "adjust_contrast",
    "angular_diameter",
    "downscale_factor",
    "downscale_view",
    "gaussian_blur",
    "generate_grid",
    "label_retention",
    "load_image",
    "optimal_grid_size",
    "pixelate",
    "preset_params",
    "protect",
    "protect_with_params",
    "recognize",
    "render_target",
    "save_image",
    "simulate_surfer",
    "ssim",
    "__version__",
]
