# ACCEPTED
class TransferRequest(BaseModel):
    from_account: str = Field(..., pattern=r"^[A-Z0-9]{10}$")
    to_account: str = Field(..., pattern=r"^[A-Z0-9]{10}$")
    amount: Decimal = Field(
        ..., gt=Decimal("0"), le=Decimal("1000000"),
        decimal_places=2
    )

    @field_validator("to_account")
    @classmethod
    def accounts_must_differ(cls, v, info):
        if v == info.data.get("from_account"):
            raise ValueError("Cannot transfer to the same account")
        return v

async def transfer_funds(request: TransferRequest, db: AsyncSession):
    from_acc = await get_account(db, request.from_account)
    if from_acc.balance < request.amount:
        raise InsufficientFundsError("Insufficient balance")
    from_acc.balance -= request.amount
    to_acc = await get_account(db, request.to_account)
    to_acc.balance += request.amount
    await db.commit()
    return {"status": "completed", "amount": str(request.amount)}
