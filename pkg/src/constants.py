"""Constants for the monomial-curve GKZ toolkit"""

# Scenario tags
TAG_IN_I = "InI"
TAG_E0_ONLY = "E0Only"
TAG_ED_ONLY = "EdOnly"
TAG_E_BOTH = "EBoth"
TAG_J = "J"

SCENARIO_TAGS = (TAG_IN_I, TAG_E0_ONLY, TAG_ED_ONLY, TAG_E_BOTH, TAG_J)

# Tags swapped by the duality alpha -> (a1, d*a1 - a2)
DUAL_TAGS = {
    TAG_IN_I: TAG_IN_I,
    TAG_E0_ONLY: TAG_ED_ONLY,
    TAG_ED_ONLY: TAG_E0_ONLY,
    TAG_E_BOTH: TAG_E_BOTH,
    TAG_J: TAG_J,
}

# Rational solution dimension per scenario
RATIONAL_DIMENSION = {
    TAG_IN_I: 1,
    TAG_E0_ONLY: 1,
    TAG_ED_ONLY: 1,
    TAG_E_BOTH: 2,
    TAG_J: 0,
}

# Exit codes
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# Environment variables
ENV_TOLERANCE_SCALE = "GKZ_TOLERANCE_SCALE"
ENV_SETTINGS_FILE = "GKZ_SETTINGS_FILE"

# Data files
SETTINGS_FILE_NAME = "settings.json"
CURVES_FILE_NAME = "curves.json"

# Verification suites
SUITE_FAST = "fast"
SUITE_FULL = "full"
