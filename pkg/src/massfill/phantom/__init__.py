from .noise import value_noise
from .mass import MassParams, render_mass
from .sample import (
    PhantomSample,
    breast_region,
    draw_mass_params,
    generate_background,
    make_sample,
    random_box,
    bbox_from_mask,
)
from .dataset import (
    PhantomDatasetConfig,
    STRATA,
    iter_sample_specs,
    load_manifest,
    make_dataset,
    manifest_samples,
)
from .pngio import read_gray16, read_mask8, write_gray16, write_mask8
