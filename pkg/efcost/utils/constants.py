import torch

DTYPE = torch.complex128
REAL_DTYPE = torch.float64

HERMITIAN_TOL = 1e-10
EIG_RESIDUAL_TOL = 1e-9
PSD_CLIP = 1e-10
TRACE_TOL = 1e-10
NORM_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
TP_TOL = 1e-9
PPT_TOL = 1e-9
RANK_TOL = 1e-10
WEIGHT_TOL = 1e-12
CONSTANCY_TOL = 1e-8
DESIGN_TOL = 1e-8

MAX_KRON_DIM = 4096
MAX_JOINT_DIM = 256

LOG2 = 0.6931471805599453
