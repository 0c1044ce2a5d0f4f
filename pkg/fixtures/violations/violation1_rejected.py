# REJECTED - Violates SEC-002 (CWE-89)
query = f"SELECT * FROM transactions WHERE amount > {amount}"
result = await db.execute(text(query))
