from decimal import Decimal

from pydantic import BaseModel, Field


class TransferRequest(BaseModel):
    from_account: str
    to_account: str
    amount: Decimal
    memo: str | None = None


class LoginRequest(BaseModel):
    email: str = Field(max_length=254)
    password: str = Field(min_length=8, max_length=128)
