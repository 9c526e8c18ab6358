"""HTTP service: streaming ask, library, briefcase, feedback, stats.

The FastAPI app lives in lexrag.service.app and is imported lazily so CLI
paths that only need configuration stay light.
"""

from .config import ProviderSettings, ServiceConfig, TokenInfo, load_config

__all__ = ["ProviderSettings", "ServiceConfig", "TokenInfo", "load_config"]
