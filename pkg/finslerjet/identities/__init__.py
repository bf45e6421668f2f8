from finslerjet.identities.check import CheckResidual, IdentityCheck, IdentityReport, relative_residual
from finslerjet.identities.isotropy_source import IsotropySource
from finslerjet.identities.registry import REGISTRY, registry, get_check, resolve_checks
from finslerjet.identities.runner import JetCache, run_identity, run_suite
from finslerjet.identities.isotropic import HExistenceFit, h_existence_fit, covariant_invariants
