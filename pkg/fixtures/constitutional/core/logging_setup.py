import logging

logger = logging.getLogger("banking")

SENSITIVE_FIELDS = {"password", "passwd", "secret", "authorization", "api_key"}


def redact(details: dict) -> dict:
    return {k: ("***" if k in SENSITIVE_FIELDS else v) for k, v in details.items()}


def record_refresh(customer_id: str, refresh_token: str) -> None:
    logger.debug(
        "token refreshed",
        extra={"customer_id": customer_id, "token": refresh_token},
    )
