"""HTTP routes. All business endpoints inherit authentication."""

from fastapi import APIRouter, Depends

from api.deps import current_customer, require_admin
from schemas.banking import AccountView, StatementQuery, TransferCreate, TransferReceipt
from services import account_service, transaction_service

# [SEC-004] Router-level auth dependency; new routes inherit it
router = APIRouter(dependencies=[Depends(current_customer)])


# [SEC-006] Request body parsed through the constrained schema
# [SEC-010] Ownership enforced in the service layer for both legs
@router.post("/transfers", response_model=TransferReceipt)
async def create_transfer(
    body: TransferCreate,
    customer_id: str = Depends(current_customer),
):
    return await transaction_service.transfer(body, customer_id)


# [SEC-001] Responses serialize through response_model; no raw HTML
@router.get("/accounts/{account_number}", response_model=AccountView)
async def read_account(
    account_number: str,
    customer_id: str = Depends(current_customer),
):
    return await account_service.get_account(account_number, customer_id)


# [SEC-001] Statement text is JSON-encoded; clients render with escaping
# [SEC-006] Query parameters validated by the schema types
@router.get("/statements", response_model=list[TransferReceipt])
async def read_statements(
    query: StatementQuery = Depends(),
    customer_id: str = Depends(current_customer),
):
    return await transaction_service.statement(query, customer_id)


# [SEC-004] Elevated surface double-gated with the admin dependency
@router.get("/audit", dependencies=[Depends(require_admin)])
async def read_audit_trail():
    return await account_service.audit_trail()
