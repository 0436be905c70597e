"""Document acquisition: DOI routing, corpus fetching, text cleaning.

The pipeline's contract starts at plain text; PDF conversion is an
upstream concern. The default fetcher reads a local corpus manifest so
everything stays hermetic.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Protocol

from .errors import FetchFailed, MalformedDoi, NotInCorpus

SI_MARKER = "===SI==="


class Publisher(str, Enum):
    ACS = "ACS"
    RSC = "RSC"
    ELSEVIER = "Elsevier"
    WILEY = "Wiley"
    SPRINGER = "Springer"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PublisherRoute:
    doi_prefix: str
    publisher: Publisher
    fetcher_id: str

    def __post_init__(self):
        if self.doi_prefix and not re.fullmatch(r"10\.\d{4,9}", self.doi_prefix):
            raise ValueError(f"bad DOI prefix {self.doi_prefix!r}")


# Prefixes are the publishers' primary CrossRef member prefixes.
DEFAULT_ROUTES = [
    PublisherRoute("10.1021", Publisher.ACS, "corpus"),
    PublisherRoute("10.1039", Publisher.RSC, "corpus"),
    PublisherRoute("10.1016", Publisher.ELSEVIER, "corpus"),
    PublisherRoute("10.1002", Publisher.WILEY, "corpus"),
    PublisherRoute("10.1007", Publisher.SPRINGER, "corpus"),
]

UNKNOWN_ROUTE = PublisherRoute("", Publisher.UNKNOWN, "corpus")

_DOI_RE = re.compile(r"10\.\d{4,9}/\S+")


def route_doi(doi: str, table: list[PublisherRoute] | None = None) -> PublisherRoute:
    """Resolve a DOI to its publisher route; longest prefix wins.

    A DOI that matches no configured prefix routes to Unknown rather
    than erroring, so routing is total over valid DOIs.
    """
    if not _DOI_RE.fullmatch(doi.strip()):
        raise MalformedDoi(f"not a DOI: {doi!r}")
    table = DEFAULT_ROUTES if table is None else table
    best = None
    for route in table:
        if doi.startswith(route.doi_prefix):
            if best is None or len(route.doi_prefix) > len(best.doi_prefix):
                best = route
    return best if best is not None else UNKNOWN_ROUTE


class Fetcher(Protocol):
    def fetch(self, route: PublisherRoute, doi: str) -> tuple[bytes, str]:
        """Return (payload bytes, media type)."""


@dataclass
class CorpusEntry:
    doi: str
    path: Path
    ccdc_codes: list[str] = field(default_factory=list)


class LocalCorpusFetcher:
    """Resolves DOIs against a JSON manifest of local text files.

    Manifest format: JSON array of {"doi", "path", "ccdc_codes"}; paths
    are relative to the manifest's directory. Multiple supporting-
    information files may be listed under "si_paths"; they are appended
    after the main text behind a marker line, ordered lexicographically
    by filename.
    """

    def __init__(self, manifest_path: str | Path):
        self.manifest_path = Path(manifest_path)
        self.base_dir = self.manifest_path.parent
        self.entries: dict[str, CorpusEntry] = {}
        self._si: dict[str, list[Path]] = {}
        for row in json.loads(self.manifest_path.read_text()):
            entry = CorpusEntry(
                doi=row["doi"],
                path=self.base_dir / row["path"],
                ccdc_codes=list(row.get("ccdc_codes", [])),
            )
            self.entries[entry.doi] = entry
            self._si[entry.doi] = sorted(
                (self.base_dir / p for p in row.get("si_paths", [])),
                key=lambda p: p.name,
            )

    def fetch(self, route: PublisherRoute, doi: str) -> tuple[bytes, str]:
        entry = self.entries.get(doi)
        if entry is None:
            raise NotInCorpus(f"{doi} not in corpus manifest {self.manifest_path}")
        try:
            text = entry.path.read_text(encoding="utf-8")
            for si_path in self._si[doi]:
                text += f"\n\n{SI_MARKER}\n\n" + si_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FetchFailed(f"cannot read corpus file for {doi}: {exc}") from exc
        return text.encode("utf-8"), "text/plain"

    def entry_for_ccdc(self, code: str) -> CorpusEntry | None:
        code = code.upper()
        for entry in self.entries.values():
            if code in (c.upper() for c in entry.ccdc_codes):
                return entry
        return None


def fetch_document(
    route: PublisherRoute,
    doi: str,
    fetchers: dict[str, Fetcher],
) -> tuple[bytes, str]:
    """Dispatch to the fetcher registered for the route."""
    fetcher = fetchers.get(route.fetcher_id)
    if fetcher is None:
        raise FetchFailed(f"no fetcher registered for {route.fetcher_id!r}")
    try:
        return fetcher.fetch(route, doi)
    except (NotInCorpus, FetchFailed):
        raise
    except Exception as exc:
        raise FetchFailed(
            f"fetcher {route.fetcher_id!r} failed for {doi} "
            f"({route.publisher.value}): {exc}"
        ) from exc


class Provenance(str, Enum):
    LOCAL_FILE = "local_file"
    FETCHED = "fetched"
    USER_UPLOAD = "user_upload"


@dataclass
class DocumentRecord:
    doc_id: str
    raw_text: str
    cleaned_text: str
    provenance: Provenance
    doi: str | None = None
    ccdc_codes_requested: list[str] = field(default_factory=list)


_DEHYPHEN_RE = re.compile(r"(?<=[A-Za-z])[-­]\n(?=[A-Za-z])")
_CONTROL_RE = re.compile(r"[^\S\n]|[\x00-\x08\x0b-\x1f\x7f]")


def _clean_once(text: str) -> str:
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = unicodedata.normalize("NFKC", text)
    text = _DEHYPHEN_RE.sub("", text)
    text = text.replace("­", "")
    # Any whitespace or control character that is not a newline becomes a
    # plain space, then runs collapse.
    text = _CONTROL_RE.sub(" ", text)
    text = re.sub(r" {2,}", " ", text)
    text = re.sub(r" *\n *", "\n", text)
    text = re.sub(r"\n{3,}", "\n\n", text)
    return text.strip()


def clean_text(raw: str) -> str:
    """Normalize extracted literature text for the pipeline.

    Folds ligatures, joins hyphenated line breaks, collapses space runs
    and normalizes paragraph boundaries to exactly one blank line.
    Iterates to a fixed point, so the function is idempotent by
    construction.
    """
    current = raw
    for _ in range(4):
        cleaned = _clean_once(current)
        if cleaned == current:
            return cleaned
        current = cleaned
    return current


def make_document(
    doc_id: str,
    raw_text: str,
    provenance: Provenance,
    doi: str | None = None,
    ccdc_codes: list[str] | None = None,
) -> DocumentRecord:
    return DocumentRecord(
        doc_id=doc_id,
        raw_text=raw_text,
        cleaned_text=clean_text(raw_text),
        provenance=provenance,
        doi=doi,
        ccdc_codes_requested=list(ccdc_codes or []),
    )
