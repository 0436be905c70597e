from .app import create_app
from .config import ApiConfig, Runtime, build_runtime

__all__ = ["ApiConfig", "Runtime", "build_runtime", "create_app"]
