from finslerjet.general_utils.app_utils import Applicability, CheckKind, ExitCode, IsotropySourceKind, Verdict
from finslerjet.general_utils.metric_families import MetricFamily
from finslerjet.general_utils.sampling import SampleConfig, TangentPoint
from finslerjet.families import MetricFamilySpec, construct, parse_spec, load_spec, predicted_invariants
from finslerjet.main import load_metric, inspect_metric, verify_metric, detect_metric

__name__ = 'finslerjet'
__version__ = '0.1.0'
