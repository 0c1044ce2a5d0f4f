"""Request and response schemas for the banking API."""

from decimal import Decimal

from pydantic import BaseModel, EmailStr, Field, field_validator


# [SEC-006] Pydantic v2, strict field constraints
class CustomerCreate(BaseModel):
    email: EmailStr
    password: str = Field(min_length=8, max_length=128)
    phone: str = Field(pattern=r"^\+[1-9]\d{1,14}$")


# [SEC-006] Transfer input bounded and pattern-checked
# [SEC-007] Decimal with explicit bounds and two places
class TransferCreate(BaseModel):
    from_account: str = Field(pattern=r"^[A-Z0-9]{10}$")
    to_account: str = Field(pattern=r"^[A-Z0-9]{10}$")
    amount: Decimal = Field(gt=Decimal("0"), le=Decimal("1000000"), decimal_places=2)

    @field_validator("to_account")
    @classmethod
    def accounts_must_differ(cls, v, info):
        if v == info.data.get("from_account"):
            raise ValueError("Cannot transfer to the same account")
        return v


# [SEC-006] Query parameters validated by schema
class StatementQuery(BaseModel):
    page: int = Field(ge=1, le=10000)
    page_size: int = Field(ge=1, le=100)


# [SEC-007] Receipts carry amounts rendered from Decimal, never float
class TransferReceipt(BaseModel):
    transfer_id: str
    amount: str
    status: str


# [SEC-001] Plain-data views; clients render with contextual escaping
class AccountView(BaseModel):
    account_number: str
    balance: str
    currency: str
