# ACCEPTED
async def get_account(
    self, db: AsyncSession,
    account_number: str,
    customer_id: str
) -> Account:
    result = await db.execute(
        select(Account).where(Account.account_number == account_number)
    )
    account = result.scalar_one_or_none()
    if not account:
        raise NotFoundError("Account not found")
    if account.customer_id != customer_id:
        raise AuthorizationError("Not authorized to access this account")
    return account
