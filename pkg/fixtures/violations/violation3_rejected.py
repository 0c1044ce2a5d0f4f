# REJECTED - Violates SEC-010 (CWE-862)
async def get_account(self, db: AsyncSession, account_number: str):
    result = await db.execute(
        select(Account).where(Account.account_number == account_number)
    )
    account = result.scalar_one_or_none()
    if not account:
        raise NotFoundError("Account not found")
    return account
