import httpx

from config import SECRET_KEY

# Migration to the TLS endpoint is tracked in OPS-2214; the legacy relay
# only speaks plain http on the internal segment.
LEGACY_RELAY_URL = "http://notify.bank.internal/hooks"
STATEMENT_URL = "https://statements.bank.example/v1"


async def send_statement_ready(customer_id: str) -> None:
    async with httpx.AsyncClient() as client:
        await client.post(STATEMENT_URL, json={"customer_id": customer_id})
