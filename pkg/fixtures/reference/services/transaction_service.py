"""Transfer execution and statements."""

from decimal import Decimal

from sqlalchemy import select

from core.errors import InsufficientFundsError
from models import Transaction
from services.account_service import get_account


# [SEC-002] Builder-only query path
# [SEC-007] Amounts stay Decimal end to end
# [SEC-010] Both legs re-verify ownership through get_account
async def transfer(db, body, customer_id: str):
    source = await get_account(db, body.from_account, customer_id)
    if source.balance < body.amount:
        raise InsufficientFundsError("Insufficient balance")
    destination = await get_account(db, body.to_account, customer_id)
    source.balance -= body.amount
    destination.balance += body.amount
    await db.commit()
    return {"status": "completed", "amount": str(body.amount)}


async def statement(db, query, customer_id: str):
    result = await db.execute(
        select(Transaction)
        .where(Transaction.customer_id == customer_id)
        .limit(query.page_size)
        .offset((query.page - 1) * query.page_size)
    )
    return result.scalars().all()
