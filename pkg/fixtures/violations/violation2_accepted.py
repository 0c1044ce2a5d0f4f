# ACCEPTED
async def register_customer(db: AsyncSession, customer_data: CustomerCreate):
    customer = Customer(**customer_data.dict())
    db.add(customer)
    await db.commit()

    audit_log = AuditLog(
        action=AuditAction.CREATE,
        resource_type="customer",
        details={
            "email": customer_data.email,
            "phone": customer_data.phone,
            "customer_id": str(customer.id)
        }
        # password explicitly excluded per SEC-015
    )
    db.add(audit_log)
    await db.commit()
    return customer
