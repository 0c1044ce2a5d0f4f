"""Customer lifecycle operations."""

from core.logging_setup import redact, write_audit
from core.security import hash_password
from models import Customer


# [SEC-002] ORM insert path; no SQL strings
# [SEC-009] Password hashed before persistence
async def register_customer(db, payload):
    customer = Customer(
        email=payload.email,
        phone=payload.phone,
        password_hash=hash_password(payload.password),
    )
    db.add(customer)
    await db.commit()
    # [SEC-015] Audit details pass through redaction before logging
    write_audit("customer.created", redact({"email": payload.email}))
    return customer


# [SEC-012] Personal documents stored through the KMS envelope
async def store_document(db, customer_id: str, document: bytes):
    envelope = await db.kms.encrypt(document)
    db.add(StoredDocument(customer_id=customer_id, body=envelope))
    await db.commit()
