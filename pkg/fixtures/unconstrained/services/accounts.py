from fastapi import HTTPException
from sqlalchemy import select

from models import AccountSnapshot


async def get_account(db, account_number: str):
    result = await db.execute(
        select(Account).where(Account.account_number == account_number)
    )
    account = result.scalar_one_or_none()
    if account is None:
        raise HTTPException(status_code=404, detail="Account not found")
    return account


async def list_accounts(db, customer_id: str):
    result = await db.execute(select(Account).where(Account.customer_id == customer_id))
    return result.scalars().all()
