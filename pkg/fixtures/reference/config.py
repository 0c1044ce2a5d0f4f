"""Runtime configuration for the banking service."""

import os


def _env(name: str, default: str) -> str:
    return os.environ.get(name, default)


# [SEC-005] Connection credentials come from the environment
DATABASE_URL = os.environ["BANKING_DATABASE_URL"]

# [SEC-013] TLS-only service endpoints
PAYMENT_GATEWAY_URL = _env("PAYMENT_GATEWAY_URL", "https://gateway.bank.internal")
STATEMENT_SERVICE_URL = _env("STATEMENT_SERVICE_URL", "https://statements.bank.internal")

# [SEC-003] Origin whitelist
ALLOWED_ORIGINS = [
    "https://online.bank.example",
    "https://admin.bank.example",
]

# [SEC-012] Field-level encryption key id for data at rest
KMS_KEY_ID = _env("BANKING_KMS_KEY_ID", "alias/banking-prod")

# Pagination hard limit for statement queries
MAX_PAGE_SIZE = 100
DEFAULT_PAGE_SIZE = 25

# [SEC-011] 15min/7day tokens
ACCESS_TOKEN_EXPIRE_MINUTES = 15

REFRESH_TOKEN_EXPIRE_DAYS = 7
