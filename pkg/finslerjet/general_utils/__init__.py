from finslerjet.general_utils.app_utils import Applicability, CheckKind, Verdict, ExitCode
from finslerjet.general_utils.metric_families import MetricFamily
