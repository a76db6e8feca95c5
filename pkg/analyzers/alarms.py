"""
Alarm extraction: raw analyzer output to canonical alarm identifiers
"""
import json
import logging
import re
from typing import Any, FrozenSet, List

from analyzers.profile import ExtractionRule
from core.errors import ExtractionError
from core.outcome import AlarmId

logger = logging.getLogger(__name__)

_LINE_SUFFIX = re.compile(r"(?::\d+)+")
_LINE_WORD = re.compile(r"\bline\s+\d+\b", re.IGNORECASE)
_SPACES = re.compile(r"\s+")


def _resolve_pointer(document: Any, pointer: str) -> Any:
    """Minimal RFC 6901 resolution"""
    if pointer == "":
        return document
    node = document
    for token in pointer.split("/")[1:]:
        token = token.replace("~1", "/").replace("~0", "~")
        if isinstance(node, list):
            if not token.isdigit() or int(token) >= len(node):
                raise ExtractionError(f"pointer {pointer!r}: no index {token!r}")
            node = node[int(token)]
        elif isinstance(node, dict):
            if token not in node:
                raise ExtractionError(f"pointer {pointer!r}: no key {token!r}")
            node = node[token]
        else:
            raise ExtractionError(f"pointer {pointer!r}: cannot descend into {type(node).__name__}")
    return node


class AlarmExtractor:
    """Extraction and normalization of alarms under an ExtractionRule"""

    @staticmethod
    def normalize_once(text: str, rule: ExtractionRule) -> str:
        if rule.drop_line_numbers:
            text = _LINE_SUFFIX.sub("", text)
            text = _LINE_WORD.sub("", text)
        if rule.collapse_spaces:
            text = _SPACES.sub(" ", text)
        if rule.strip:
            text = text.strip()
        return text

    @staticmethod
    def normalize(text: str, rule: ExtractionRule) -> AlarmId:
        """Apply the rule's normalization steps until nothing changes"""
        while True:
            normalized = AlarmExtractor.normalize_once(text, rule)
            if normalized == text:
                return normalized
            text = normalized

    @staticmethod
    def raw_alarms(output: str, rule: ExtractionRule) -> List[str]:
        if rule.mode == "regex_lines":
            pattern = re.compile(rule.pattern)
            found = []
            for line in output.splitlines():
                match = pattern.search(line)
                if match:
                    found.append(match.group(1) or "")
            return found

        try:
            document = json.loads(output)
        except json.JSONDecodeError as e:
            raise ExtractionError(f"analyzer output is not JSON: {e}") from e
        items = _resolve_pointer(document, rule.pointer)
        if not isinstance(items, list):
            raise ExtractionError(f"pointer {rule.pointer!r} does not name an array")
        # Structured alarms are identified by their canonical JSON text
        return [x if isinstance(x, str) else json.dumps(x, sort_keys=True) for x in items]

    @staticmethod
    def extract(output: str, rule: ExtractionRule) -> FrozenSet[AlarmId]:
        """
        Canonical alarm set of one analyzer run

        Raises:
            ExtractionError: JSON output that is malformed or lacks the pointed array
        """
        alarms = set()
        for raw in AlarmExtractor.raw_alarms(output, rule):
            alarm = AlarmExtractor.normalize(raw, rule)
            if alarm:
                alarms.add(alarm)
        logger.debug(f"Extracted {len(alarms)} alarms")
        return frozenset(alarms)
