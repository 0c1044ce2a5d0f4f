"""Service entry point: middleware, routers, and error shaping."""

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.httpsredirect import HTTPSRedirectMiddleware
from fastapi.responses import JSONResponse

from api.routes import router
from config import ALLOWED_ORIGINS
from core.errors import DomainError
from core.logging_setup import logger

app = FastAPI(title="banking service")

# [SEC-013] HTTPS redirect at the edge
app.add_middleware(HTTPSRedirectMiddleware)

# [SEC-003] Origin whitelist
app.add_middleware(
    CORSMiddleware,
    allow_origins=ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["GET", "POST"],
    allow_headers=["Authorization", "Content-Type"],
)

# [SEC-004] Business routes mount behind the router-level auth dependency
app.include_router(router)


@app.get("/health")
async def health():
    return {"status": "ok"}


# [SEC-014] Generic messages for unexpected failures
@app.exception_handler(Exception)
async def unhandled_error(request: Request, exc: Exception):
    logger.exception("unhandled error")
    return JSONResponse(status_code=500, content={"detail": "Internal server error"})


# [SEC-014] Domain errors map to sanitized public messages
@app.exception_handler(DomainError)
async def domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.public_message})
