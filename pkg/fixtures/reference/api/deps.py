"""Request dependencies: bearer-token authentication for every route."""

from fastapi import Depends, HTTPException, status
from fastapi.security import OAuth2PasswordBearer
from jose import JWTError

from core.security import decode_token

# [SEC-008] FastAPI OAuth2 bearer flow
oauth2_scheme = OAuth2PasswordBearer(tokenUrl="/auth/token")


# [SEC-004] Every business route resolves a verified principal
# [SEC-008] Typed claims checked on every request
async def current_customer(token: str = Depends(oauth2_scheme)) -> str:
    try:
        claims = decode_token(token)
    except JWTError:
        raise HTTPException(status_code=status.HTTP_401_UNAUTHORIZED, detail="Invalid token")
    # [SEC-011] Expiry enforced via the exp claim on decode
    if claims.get("type") != "access":
        raise HTTPException(status_code=status.HTTP_401_UNAUTHORIZED, detail="Invalid token")
    return claims["sub"]


# [SEC-004] Elevated surface requires an admin principal on top of auth
async def require_admin(subject: str = Depends(current_customer)) -> str:
    if not subject.startswith("admin:"):
        raise HTTPException(status_code=status.HTTP_403_FORBIDDEN, detail="Forbidden")
    return subject
