from .client import ChatRequest, ChatResponse, Gateway, complete_json
from .ledger import CostLedger, LedgerEntry, ledger_add
from .providers import (
    LiveProvider,
    Provider,
    ProviderReply,
    RateLimiter,
    RecordingProvider,
    ReplayProvider,
    fixture_key,
)
from .templates import PromptTemplate, TemplateRegistry, default_registry, render_prompt

__all__ = [
    "ChatRequest",
    "ChatResponse",
    "CostLedger",
    "Gateway",
    "LedgerEntry",
    "LiveProvider",
    "PromptTemplate",
    "Provider",
    "ProviderReply",
    "RateLimiter",
    "RecordingProvider",
    "ReplayProvider",
    "TemplateRegistry",
    "complete_json",
    "default_registry",
    "fixture_key",
    "ledger_add",
    "render_prompt",
]
