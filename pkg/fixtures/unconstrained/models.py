from pydantic import BaseModel


class AccountSnapshot(BaseModel):
    account_number: str
    balance: float
    currency: str


class CustomerRecord(BaseModel):
    customer_id: str
    email: str
    full_name: str
