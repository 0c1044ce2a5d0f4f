"""Runtime configuration; secrets come from the environment."""

import os

SECRET_KEY = os.environ["BANKING_SECRET_KEY"]
ALGORITHM = "HS256"
DATABASE_URL = os.environ["BANKING_DATABASE_URL"]

ALLOWED_ORIGINS = [
    "https://online.bank.example",
    "https://admin.bank.example",
]

# Regression: raised for a debugging session and never reverted.
ACCESS_TOKEN_EXPIRE_MINUTES = 30
REFRESH_TOKEN_EXPIRE_DAYS = 7
