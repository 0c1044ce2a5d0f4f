"""App settings, thrown together to get the demo running."""

SECRET_KEY = "dev-secret-key-please-change"
ALGORITHM = "HS256"
ACCESS_TOKEN_EXPIRE_MINUTES = 60
DATABASE_URL = "postgresql+asyncpg://bank:bank@db:5432/bank"
DEBUG = True
