"""Structured logging with credential redaction."""

import logging

logger = logging.getLogger("banking")

# [SEC-015] Field redaction set
SENSITIVE_FIELDS = frozenset(
    {"password", "passwd", "secret", "token", "authorization", "api_key"}
)


# [SEC-015] Every audit payload passes through the filter
def redact(details: dict) -> dict:
    return {key: ("***" if key in SENSITIVE_FIELDS else value) for key, value in details.items()}


# [SEC-015] Audit writer accepts pre-redacted payloads only
def write_audit(action: str, details: dict) -> None:
    logger.info("audit %s", action, extra={"details": redact(details)})


# [SEC-014] Tracebacks go to server logs, never to responses
def log_unexpected(context: str) -> None:
    logger.exception("unexpected failure in %s", context)
