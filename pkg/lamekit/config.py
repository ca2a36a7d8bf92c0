"""Numerical tolerances and solver settings.

Every operation that iterates accepts an optional `config` keyword. Settings are
plain values in a frozen dataclass; there is no file or environment lookup.

## Usage

```python
from dataclasses import replace

from lamekit.config import DEFAULT_CONFIG

loose = replace(DEFAULT_CONFIG, eigen_tol=1e-9)
```
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances shared by the eigenvalue, integration and zero-counting routines.

    Attributes:
        eigen_tol: Bracket width for eigenvalues (bisection and root tracking).
        ode_rtol: Relative tolerance of the monodromy integration.
        ode_atol: Absolute tolerance of the monodromy integration.
        homotopy_steps: Number of geometric steps in k when tracking Floquet eigenvalues.
        scan_points: Initial number of samples for the brute-force discriminant scan.
        zero_grid_initial: First grid size when counting sign changes on the segment.
        zero_grid_max: Grid size beyond which zero counting gives up.
        winding_refusal: Relative modulus below which a winding number is refused.
        max_truncation: Largest truncation size tried by adaptive eigenvalue solves.
        inverse_iteration_retries: Perturbed-shift retries before inverse iteration fails.
        snap_tol: Distance within which nu is snapped to the nearest multiple of 1/2.
    """

    eigen_tol: float = 1e-12
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-12
    homotopy_steps: int = 8
    scan_points: int = 4000
    zero_grid_initial: int = 2048
    zero_grid_max: int = 2**20
    winding_refusal: float = 1e-10
    max_truncation: int = 100_000
    inverse_iteration_retries: int = 3
    snap_tol: float = 1e-12


DEFAULT_CONFIG = SolverConfig()
