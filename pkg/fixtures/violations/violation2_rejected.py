# REJECTED - Violates SEC-015 (CWE-532)
async def register_customer(db: AsyncSession, customer_data: CustomerCreate):
    customer = Customer(**customer_data.dict())
    db.add(customer)
    await db.commit()

    audit_log = AuditLog(
        action=AuditAction.CREATE,
        resource_type="customer",
        details={
            "email": customer_data.email,
            "password": customer_data.password,
            "phone": customer_data.phone
        }
    )
    db.add(audit_log)
    await db.commit()
    return customer
