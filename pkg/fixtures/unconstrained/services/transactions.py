from sqlalchemy import text


async def transactions_over(db, minimum):
    query = f"SELECT * FROM transactions WHERE amount > {minimum}"
    rows = await db.execute(text(query))
    return rows.fetchall()


async def record_transfer(db, from_account, to_account, amount):
    from_account.balance -= amount
    to_account.balance += amount
    await db.commit()
    return {"status": "completed"}
