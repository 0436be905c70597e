"""Service configuration and runtime assembly."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..dataset import Store, load_dataset
from ..gateway import (
    CostLedger,
    Gateway,
    LiveProvider,
    RateLimiter,
    RecordingProvider,
    ReplayProvider,
    default_registry,
)
from ..ingest import LocalCorpusFetcher
from ..pipeline import PipelineConfig
from ..query import QuerySession


@dataclass
class ApiConfig:
    out_dir: Path
    corpus_manifest: Path | None = None
    dataset_path: Path | None = None
    fixture_store: Path | None = None
    cif_dir: Path | None = None
    price_table: Path | None = None
    llm_mode: str = "replay"  # replay | record | live
    parser_mode: str = "rules_only"  # rules_only | llm_primary
    compose_mode: str = "template"  # template | llm
    abbrev_mode: str = "regex_only"
    live_base_url: str = "http://localhost:11434/v1"
    api_key_env: str = "MOFMINER_API_KEY"
    rate_limit_rpm: float | None = None  # live-provider requests per minute
    workers: int = 2
    session_capacity: int = 20

    def validate(self) -> None:
        """Fail fast on missing inputs before the server starts."""
        for name in ("corpus_manifest", "dataset_path", "fixture_store", "cif_dir", "price_table"):
            value = getattr(self, name)
            if value is not None and not Path(value).exists():
                raise FileNotFoundError(f"{name} does not exist: {value}")
        if self.llm_mode not in ("replay", "record", "live"):
            raise ValueError(f"bad llm_mode {self.llm_mode!r}")
        Path(self.out_dir).mkdir(parents=True, exist_ok=True)


def _build_gateway(config: ApiConfig) -> Gateway:
    ledger = None
    if config.price_table is not None:
        ledger = CostLedger.from_config(config.price_table)
    if config.llm_mode == "replay":
        if config.fixture_store is None:
            raise ValueError("replay mode requires fixture_store")
        provider = ReplayProvider(config.fixture_store)
    else:
        limiter = RateLimiter(config.rate_limit_rpm) if config.rate_limit_rpm else None
        live = LiveProvider(
            config.live_base_url, api_key_env=config.api_key_env, rate_limiter=limiter
        )
        if config.llm_mode == "record":
            if config.fixture_store is None:
                raise ValueError("record mode requires fixture_store")
            provider = RecordingProvider(live, config.fixture_store)
        else:
            provider = live
    return Gateway(provider=provider, registry=default_registry(), ledger=ledger)


class Runtime:
    """Shared state behind the HTTP handlers: store, gateway, sessions."""

    def __init__(self, config: ApiConfig):
        config.validate()
        self.config = config
        self.gateway = _build_gateway(config)
        self.store: Store | None = (
            load_dataset(config.dataset_path) if config.dataset_path else None
        )
        self.fetcher: LocalCorpusFetcher | None = (
            LocalCorpusFetcher(config.corpus_manifest) if config.corpus_manifest else None
        )
        self.pipeline_config = PipelineConfig(
            out_dir=Path(config.out_dir),
            gateway=self.gateway,
            store=self.store,
            abbrev_mode=config.abbrev_mode,
        )
        self._sessions: dict[str, QuerySession] = {}
        self._session_locks: dict[str, threading.Lock] = {}
        self._lock = threading.Lock()

    def session(self, session_id: str) -> tuple[QuerySession, threading.Lock]:
        with self._lock:
            if session_id not in self._sessions:
                if self.store is None:
                    raise ValueError("no dataset configured")
                self._sessions[session_id] = QuerySession(
                    store=self.store,
                    gateway=self.gateway,
                    parser_mode=self.config.parser_mode,
                    compose_mode=self.config.compose_mode,
                    capacity=self.config.session_capacity,
                )
                self._session_locks[session_id] = threading.Lock()
            return self._sessions[session_id], self._session_locks[session_id]


def build_runtime(config: ApiConfig) -> Runtime:
    return Runtime(config)
