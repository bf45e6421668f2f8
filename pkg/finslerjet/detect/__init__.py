from finslerjet.detect.weak_isotropy import WeaklyIsotropicFit, weakly_isotropic_fit, weakly_isotropic_jets
from finslerjet.detect.randers_split import RandersSplit, randers_split
from finslerjet.detect.quadratic import QuadraticReconstruction, quadratic_root, quadratic_reconstruction
from finslerjet.detect.classify import GridVerdict, detect_scalar_flag, detect_at, detect_over_grid
