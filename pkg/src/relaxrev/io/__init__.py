"""Reading and writing knowledge-base documents and run configurations."""

from .config import RunConfig, load_config, parse_config
from .document import (
    KBDocument, build_system, format_sentence, load_document, merge_documents,
    parse_document, parse_sentence, revision_system, serialize_document,
)

__all__ = [
    "KBDocument", "build_system", "format_sentence", "load_document", "merge_documents",
    "parse_document", "parse_sentence", "revision_system", "serialize_document",
    "RunConfig", "load_config", "parse_config",
]
