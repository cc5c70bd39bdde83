"""Pluggable text-completion providers.

The pipeline depends on one call shape: prompt in, text out. Live traffic
goes through an HTTP chat-style endpoint; tests and demos replay cassettes
keyed by the full prompt text.
"""

from __future__ import annotations

import os
from typing import Protocol

from ..errors import CassetteMiss, ProviderError
from .cassette import Cassette


class LLMProvider(Protocol):
    def complete(self, prompt: str) -> str: ...


class HttpLLMProvider:
    """OpenAI-style chat endpoint: POST {base}/chat/completions."""

    def __init__(
        self,
        base_url: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        temperature: float = 0.0,
        timeout: float = 60.0,
    ):
        self.base_url = (base_url or os.environ.get("LLM_API_BASE", "")).rstrip("/")
        self.api_key = api_key or os.environ.get("LLM_API_KEY", "")
        self.model = model or os.environ.get("LLM_MODEL", "")
        self.temperature = temperature
        self.timeout = timeout
        if not self.base_url:
            raise ProviderError("LLM_API_BASE not configured", retryable=False)

    def complete(self, prompt: str) -> str:
        import httpx

        payload = {
            "model": self.model,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
            "response_format": {"type": "json_object"},
        }
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            resp = httpx.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ProviderError(f"llm transport failure: {exc}", retryable=True) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise ProviderError(
                f"llm status {resp.status_code}", retryable=True, status=resp.status_code
            )
        if resp.status_code != 200:
            raise ProviderError(
                f"llm status {resp.status_code}", retryable=False, status=resp.status_code
            )
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ProviderError(f"malformed llm response envelope: {exc}", retryable=False) from exc


class ReplayLLM:
    """Serves completions from a cassette; unknown prompts are a hard miss."""

    def __init__(self, cassette: Cassette):
        self.cassette = cassette

    def complete(self, prompt: str) -> str:
        response = self.cassette.get("llm", prompt)
        return response["text"]


class RecordingLLM:
    """Pass-through that records every completion for later replay."""

    def __init__(self, inner: LLMProvider, cassette: Cassette):
        self.inner = inner
        self.cassette = cassette

    def complete(self, prompt: str) -> str:
        # Re-recording an identical prompt reuses the stored answer so
        # record mode is idempotent over reruns.
        try:
            return ReplayLLM(self.cassette).complete(prompt)
        except CassetteMiss:
            pass
        text = self.inner.complete(prompt)
        self.cassette.put("llm", prompt, {"text": text})
        return text
