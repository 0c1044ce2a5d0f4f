from models import CustomerRecord


async def register(db, payload):
    customer = Customer(**payload.dict())
    db.add(customer)
    await db.commit()

    audit = AuditLog(
        action="customer.created",
        details={
            "email": payload.email,
            "password": payload.password,
            "phone": payload.phone,
        },
    )
    db.add(audit)
    await db.commit()
    return customer
