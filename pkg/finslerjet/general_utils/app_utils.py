from enum import Enum


class Applicability(Enum):
    ANY_METRIC = "any_metric"
    SCALAR_FLAG_ONLY = "scalar_flag_only"
    WEAKLY_ISOTROPIC_ONLY = "weakly_isotropic_only"
    PROJECTIVELY_FLAT_ONLY = "projectively_flat_only"


class CheckKind(Enum):
    POINTWISE = "pointwise"
    EXISTENCE = "existence"


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class ExitCode(Enum):
    SUCCESS = 0
    CHECK_FAILED = 1
    USAGE_ERROR = 2
    DOMAIN_ERROR = 3


class IsotropySourceKind(Enum):
    PREDICTED = "predicted"
    FITTED = "fitted"
