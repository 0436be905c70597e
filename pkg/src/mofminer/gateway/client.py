"""JSON-constrained chat completion with one repair retry."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import jsonschema

from ..errors import SchemaViolation
from .ledger import CostLedger, ledger_add
from .providers import Provider
from .templates import Message, PromptTemplate, TemplateRegistry, render_prompt

_JSON_BLOCK_RE = re.compile(r"\{.*\}|\[.*\]", re.DOTALL)


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    template_name: str
    user_payload: str
    temperature: float = 0.0
    max_output_tokens: int = 4096

    def __post_init__(self):
        if not self.user_payload:
            raise ValueError("user_payload must be non-empty")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")


@dataclass
class ChatResponse:
    raw_text: str
    parsed_json: object | None
    input_tokens: int
    output_tokens: int
    latency_ms: int


def extract_json(text: str):
    """Parse a reply as JSON, tolerating code fences and surrounding prose."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        match = _JSON_BLOCK_RE.search(text)
        if match is None:
            raise
        return json.loads(match.group(0))


def validation_error_of(template: PromptTemplate, raw_text: str) -> str | None:
    """None when the reply satisfies the template schema, else the error
    text used in the repair prompt."""
    try:
        parsed = extract_json(raw_text)
    except json.JSONDecodeError as exc:
        return f"reply was not valid JSON: {exc}"
    try:
        jsonschema.validate(parsed, template.output_schema)
    except jsonschema.ValidationError as exc:
        return f"reply violated the output schema: {exc.message}"
    return None


def build_repair_messages(
    messages: list[Message], raw_text: str, error: str
) -> list[Message]:
    return messages + [
        {"role": "assistant", "content": raw_text},
        {
            "role": "user",
            "content": (
                f"Your previous reply was rejected: {error}. "
                "Reply again with a single JSON value matching the required schema."
            ),
        },
    ]


def complete_json(
    request: ChatRequest,
    provider: Provider,
    registry: TemplateRegistry,
) -> ChatResponse:
    """Send a templated request and validate the reply against the
    template's schema.

    One automatic repair attempt re-prompts with the validation error
    appended; if that also fails, SchemaViolation is raised carrying the
    raw text and a ChatResponse with parsed_json absent.
    """
    template = registry.get(request.template_name)
    messages = render_prompt(template, request.user_payload)

    reply = provider.send(
        messages,
        model_id=request.model_id,
        temperature=request.temperature,
        max_output_tokens=request.max_output_tokens,
    )
    error = validation_error_of(template, reply.raw_text)
    if error is None:
        return ChatResponse(
            reply.raw_text,
            extract_json(reply.raw_text),
            reply.input_tokens,
            reply.output_tokens,
            reply.latency_ms,
        )

    retry = provider.send(
        build_repair_messages(messages, reply.raw_text, error),
        model_id=request.model_id,
        temperature=request.temperature,
        max_output_tokens=request.max_output_tokens,
    )
    total_in = reply.input_tokens + retry.input_tokens
    total_out = reply.output_tokens + retry.output_tokens
    total_latency = reply.latency_ms + retry.latency_ms
    retry_error = validation_error_of(template, retry.raw_text)
    if retry_error is None:
        return ChatResponse(
            retry.raw_text, extract_json(retry.raw_text), total_in, total_out, total_latency
        )
    response = ChatResponse(retry.raw_text, None, total_in, total_out, total_latency)
    raise SchemaViolation(
        f"reply failed validation after repair retry: {retry_error}",
        raw_text=retry.raw_text,
        response=response,
    )


@dataclass
class Gateway:
    """Bundles a provider, template registry and optional cost ledger.

    Pipeline nodes call this instead of wiring the three pieces
    themselves; every completed call is charged to the ledger when the
    model has a configured price.
    """

    provider: Provider
    registry: TemplateRegistry
    ledger: CostLedger | None = None
    default_models: dict[str, str] = field(default_factory=dict)

    def model_for(self, template_name: str) -> str:
        return self.default_models.get(
            template_name, self.default_models.get("*", "gpt-4o-mini")
        )

    def complete_json(
        self,
        template_name: str,
        payload: str,
        *,
        model_id: str | None = None,
        doc_id: str = "",
        node: str = "",
        temperature: float = 0.0,
        max_output_tokens: int = 4096,
    ) -> ChatResponse:
        request = ChatRequest(
            model_id=model_id or self.model_for(template_name),
            template_name=template_name,
            user_payload=payload,
            temperature=temperature,
            max_output_tokens=max_output_tokens,
        )
        try:
            response = complete_json(request, self.provider, self.registry)
        except SchemaViolation as exc:
            if exc.response is not None:
                self._charge(doc_id, node, exc.response, request.model_id)
            raise
        self._charge(doc_id, node, response, request.model_id)
        return response

    def _charge(self, doc_id: str, node: str, response: ChatResponse, model_id: str) -> None:
        if self.ledger is not None and model_id in self.ledger.price_table:
            ledger_add(self.ledger, doc_id, node, response, model_id)
