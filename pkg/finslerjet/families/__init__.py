from finslerjet.families.spec import MetricFamilySpec, parse_spec, load_spec
from finslerjet.families.constructors import construct, funk_metric, euclidean_metric, NavigationData, probe_lattice
from finslerjet.families.predicted import PredictedInvariants, predicted_invariants
