from fastapi import HTTPException
from sqlalchemy import select

from core.errors import AuthorizationError


async def get_account(db, account_number: str, customer_id: str):
    result = await db.execute(
        select(Account).where(Account.account_number == account_number)
    )
    account = result.scalar_one_or_none()
    if account is None:
        raise HTTPException(status_code=404, detail="Account not found")
    if account.customer_id != customer_id:
        raise AuthorizationError("Not authorized to access this account")
    return account
