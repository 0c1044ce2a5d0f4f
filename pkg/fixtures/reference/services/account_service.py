"""Account domain operations."""

from sqlalchemy import select

from core.errors import AuthorizationError, NotFoundError
from models import Account, AuditEvent


# [SEC-002] SQLAlchemy ORM; services never assemble SQL strings
# [SEC-010] Ownership verification
async def get_account(db, account_number: str, customer_id: str):
    result = await db.execute(
        select(Account).where(Account.account_number == account_number)
    )
    account = result.scalar_one_or_none()
    if account is None:
        raise NotFoundError("Account not found")
    if account.customer_id != customer_id:
        raise AuthorizationError("Not authorized to access this account")
    return account


# [SEC-002] Bound parameters via the query builder
# [SEC-010] Listing scoped to the authenticated customer
async def list_accounts(db, customer_id: str):
    result = await db.execute(select(Account).where(Account.customer_id == customer_id))
    return result.scalars().all()


async def audit_trail(db=None):
    result = await db.execute(select(AuditEvent).order_by(AuditEvent.created_at))
    return result.scalars().all()
