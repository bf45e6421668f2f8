from finslerjet.jet.context import JetContext
from finslerjet.jet.value import JetValue, seed_variable, extract_partial, jet_arith, einsum, sqrt, exp, log
from finslerjet.jet.linalg import jet_inverse, jet_linear_solve
