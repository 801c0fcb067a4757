from .names import (
    ALL_NAMES,
    BIRADS_CODE,
    BIRADS_SLOT,
    CLINICAL_NAMES,
    DENSITY_CODE,
    DENSITY_SLOT,
    GROUP_SLICES,
    INDEX,
    N_FEATURES,
    N_RADIOMICS,
    RADIOMICS_NAMES,
)
from .quantize import QuantizedRoi, quantize
from .shape import MultiComponentMaskError, shape_features
from .firstorder import firstorder_features
from .glcm import GlcmPairsError, glcm_features
from .glszm import glszm_features
from .extract import extract_all, largest_component, DEFAULT_BINS
from .normalize import FeatureNormalizer
from .featurecsv import read_features, write_features
