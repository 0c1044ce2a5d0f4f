# REJECTED - Violates SEC-006 (CWE-20) and SEC-007 (CWE-190)
class TransferRequest(BaseModel):
    from_account: str
    to_account: str
    amount: float  # No constraints on value

async def transfer_funds(request: TransferRequest, db: AsyncSession):
    from_acc = await get_account(db, request.from_account)
    to_acc = await get_account(db, request.to_account)
    from_acc.balance -= request.amount  # Negative amounts reverse flow
    to_acc.balance += request.amount
    await db.commit()
    return {"status": "completed", "amount": request.amount}
