# ACCEPTED
stmt = select(Transaction).where(Transaction.amount > amount)
result = await db.execute(stmt)
