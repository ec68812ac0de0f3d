"""Quaternion-parameterized spin tomography and Gaussian-state tomograms."""

from .group_param import (
    CayleyKlein,
    EulerAngles,
    cayley_klein_from_euler,
    cayley_klein_from_quaternion,
    direction_from_euler,
    direction_from_quaternion,
    euler_to_su2,
    haar_sample,
    quat_mul,
    quat_norm,
    quaternion_from_euler,
    quaternion_from_su2,
    quaternion_to_euler,
    rotation_from_euler,
    rotation_from_quaternion,
    su2_from_quaternion,
)
from .quadrature import (
    QuadratureRule,
    integrate,
    monte_carlo_rule_s3,
    product_rule_s2,
    product_rule_s3,
)
from .spin_state import (
    density_from_stokes,
    hs_distance,
    purity_direct,
    quaternion_coefficients_of_qubit,
    random_density,
    stokes_from_density,
)
from .spin_tomography import (
    SpinTomogram,
    TomogramSample,
    euler_evaluator,
    hs_lower_bound,
    purity_from_tomogram,
    quaternion_evaluator,
    qubit_tomogram_closed_form,
    qubit_tomogram_quaternion,
    reconstruct_density_euler,
    reconstruct_density_quaternion,
    reconstruct_linear_inversion,
    reconstruction_kernel,
    sample_tomogram,
    tomogram_euler,
    tomogram_quaternion,
    tomogram_value,
)
from .wigner import wigner_3j, wigner_D, wigner_D_from_quaternion, wigner_small_d

__version__ = "0.1.0"
