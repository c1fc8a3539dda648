"""Random-matrix analysis of equity return cross-correlations."""

__version__ = "0.1.0"

from .correlation import (  # noqa: E402
    CorrelationMatrix,
    RmtLaw,
    correlation_matrix,
    mp_bounds,
    mp_density,
    surrogate_correlation,
)
from .decomposition import CorrelationComponents, decompose, element_distribution, suggest_ns  # noqa: E402
from .market_data import PricePanel, PriceSeries, align_panel, load_prices  # noqa: E402
from .network import (  # noqa: E402
    MarketGraph,
    export_graph,
    mantegna_distance,
    minimum_spanning_tree,
    sweep_threshold,
    threshold_network,
)
from .returns import ReturnPanel, log_returns, normalize  # noqa: E402
from .spectral import (  # noqa: E402
    SpectralDecomposition,
    classify_spectrum,
    eigendecompose,
    ipr,
    ipr_profile,
    porter_thomas_test,
    sector_composition,
)
from .synth import FactorModelSpec, generate, price_panel_from_returns  # noqa: E402
from .temporal import lambda0_series, overlap_matrix, rolling_market_mode  # noqa: E402
