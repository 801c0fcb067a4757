"""Canonical feature vector layout: 67 radiomics slots + 2 clinical slots.

Slot order is frozen; every CSV, checkpoint and prompt index in the package
refers to this list. density is coded 0=low, 1=high; birads 0=normal,
0.5=benign, 1=malignant.
"""

SHAPE_NAMES = [
    "shape_MeshSurface",
    "shape_PixelSurface",
    "shape_Perimeter",
    "shape_PerimeterSurfaceRatio",
    "shape_Sphericity",
    "shape_MaximumDiameter",
    "shape_MajorAxisLength",
    "shape_MinorAxisLength",
    "shape_Elongation",
]

FIRSTORDER_NAMES = [
    "firstorder_Energy",
    "firstorder_TotalEnergy",
    "firstorder_Entropy",
    "firstorder_Minimum",
    "firstorder_10Percentile",
    "firstorder_90Percentile",
    "firstorder_Maximum",
    "firstorder_Mean",
    "firstorder_Median",
    "firstorder_InterquartileRange",
    "firstorder_Range",
    "firstorder_MeanAbsoluteDeviation",
    "firstorder_RobustMeanAbsoluteDeviation",
    "firstorder_RootMeanSquared",
    "firstorder_Skewness",
    "firstorder_Kurtosis",
    "firstorder_Variance",
    "firstorder_Uniformity",
]

GLCM_NAMES = [
    "glcm_Autocorrelation",
    "glcm_JointAverage",
    "glcm_ClusterProminence",
    "glcm_ClusterShade",
    "glcm_ClusterTendency",
    "glcm_Contrast",
    "glcm_Correlation",
    "glcm_DifferenceAverage",
    "glcm_DifferenceEntropy",
    "glcm_DifferenceVariance",
    "glcm_Id",
    "glcm_Idm",
    "glcm_Idmn",
    "glcm_Idn",
    "glcm_Imc1",
    "glcm_Imc2",
    "glcm_InverseVariance",
    "glcm_JointEnergy",
    "glcm_JointEntropy",
    "glcm_MaximumProbability",
    "glcm_MCC",
    "glcm_SumAverage",
    "glcm_SumEntropy",
    "glcm_SumSquares",
]

GLSZM_NAMES = [
    "glszm_SmallAreaEmphasis",
    "glszm_LargeAreaEmphasis",
    "glszm_GrayLevelNonUniformity",
    "glszm_GrayLevelNonUniformityNormalized",
    "glszm_SizeZoneNonUniformity",
    "glszm_SizeZoneNonUniformityNormalized",
    "glszm_ZonePercentage",
    "glszm_GrayLevelVariance",
    "glszm_ZoneVariance",
    "glszm_ZoneEntropy",
    "glszm_LowGrayLevelZoneEmphasis",
    "glszm_HighGrayLevelZoneEmphasis",
    "glszm_SmallAreaLowGrayLevelEmphasis",
    "glszm_SmallAreaHighGrayLevelEmphasis",
    "glszm_LargeAreaLowGrayLevelEmphasis",
    "glszm_LargeAreaHighGrayLevelEmphasis",
]

CLINICAL_NAMES = ["density", "birads"]

RADIOMICS_NAMES = SHAPE_NAMES + FIRSTORDER_NAMES + GLCM_NAMES + GLSZM_NAMES
ALL_NAMES = RADIOMICS_NAMES + CLINICAL_NAMES

N_RADIOMICS = len(RADIOMICS_NAMES)
N_FEATURES = len(ALL_NAMES)
assert N_RADIOMICS == 67 and N_FEATURES == 69

GROUP_SLICES = {
    "shape": slice(0, 9),
    "firstorder": slice(9, 27),
    "glcm": slice(27, 51),
    "glszm": slice(51, 67),
    "clinical": slice(67, 69),
}

INDEX = {name: i for i, name in enumerate(ALL_NAMES)}

DENSITY_SLOT = INDEX["density"]
BIRADS_SLOT = INDEX["birads"]

DENSITY_CODE = {"low": 0.0, "high": 1.0}
BIRADS_CODE = {"normal": 0.0, "benign": 0.5, "malignant": 1.0}
