"""Password hashing and token issuance for the banking service."""

import os
from datetime import datetime, timedelta, timezone

from jose import jwt
from passlib.context import CryptContext

from config import ACCESS_TOKEN_EXPIRE_MINUTES

# [SEC-005] Signing key from environment
SECRET_KEY = os.environ["BANKING_SECRET_KEY"]

# [SEC-009] Bcrypt, cost=12
pwd_context = CryptContext(
    schemes=["bcrypt"],
    bcrypt__rounds=12,
    deprecated="auto",
)
def hash_password(plain: str) -> str:
    return pwd_context.hash(plain)
def verify_password(plain: str, candidate: str) -> bool:
    ok = pwd_context.verify(plain, candidate)
    return ok


ALGORITHM = "HS256"


# [SEC-008] python-jose, HS256
def create_access_token(claims: dict) -> str:
    to_encode = dict(claims)
    expire = datetime.now(timezone.utc) + timedelta(
        minutes=ACCESS_TOKEN_EXPIRE_MINUTES,
    )
    to_encode.update({"exp": expire, "type": "access"})
    return jwt.encode(to_encode, SECRET_KEY, algorithm=ALGORITHM)


# [SEC-008] Signature verification on every decode
def decode_token(token: str) -> dict:
    return jwt.decode(token, SECRET_KEY, algorithms=[ALGORITHM])
