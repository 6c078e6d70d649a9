"""High-harmonic generation driven by squeezed, elliptically polarized light.

Classical-limit phase-space sampling of the driver, a stationary-phase SFA
dipole per field realization, ensemble spectra, polarization and
photon-statistics observables, and an analytic toy model for ``g2``.
"""
__version__ = "0.1.0"

from .phase_space import (  # noqa: E402
    DegenerateDistributionError,
    DriverConfig,
    FieldRealization,
    Monochromatic,
    QuadratureSample,
    Sin2,
    build_quadrature_samples,
    evaluate_field,
    husimi_marginal_density,
    realize_field,
    realizations,
)
from .sfa import (  # noqa: E402
    ConfigurationError,
    DipoleRecord,
    FieldContext,
    SfaGrid,
    action,
    adk_rate,
    bound_continuum_dipole,
    compute_dipole,
    compute_dipoles,
    stationary_momentum,
)
from .spectra import (  # noqa: E402
    SpectrumSet,
    UndefinedReferenceError,
    accumulate,
    cutoff_order,
    delta_s,
    fourier_of_delta_s,
    harmonic_intensity,
)
from .observables import (  # noqa: E402
    DarkHarmonicError,
    HarmonicReport,
    ellipticity,
    g2,
    harmonic_report,
    visibility,
)
from .toy import (  # noqa: E402
    ToyModelParams,
    g2_bsv_closed_form,
    g2_toy_depleted,
    g2_toy_quadrature,
)
