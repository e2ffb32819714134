# SQLite journal of computed results (recurrences, products, verdicts)

import logging
import sqlite3
from datetime import datetime
from typing import Dict, List, Optional

logger = logging.getLogger(__name__)

KINDS = ("rec", "prod", "equal", "normalize", "verify")


class ResultStore:
    """SQLite store for computed results, one row per (kind, query)."""

    def __init__(self, db_path: str = "hyperseq.db"):
        """Open the database and create the results table if needed."""
        self.db_path = db_path
        self.init_database()

    def init_database(self):
        with sqlite3.connect(self.db_path) as conn:
            conn.execute('''
                CREATE TABLE IF NOT EXISTS results (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    kind TEXT NOT NULL,
                    query TEXT NOT NULL,
                    result TEXT,
                    verdict INTEGER,
                    created_at TEXT,
                    UNIQUE(kind, query)
                )
            ''')
            conn.commit()

    def record(self, kind: str, query: str, result: str, verdict: Optional[bool] = None) -> Optional[int]:
        """
        Journal one computed result.

        Args:
            kind: one of "rec", "prod", "equal", "normalize", "verify"
            query: canonical input text
            result: rendered result
            verdict: truth value for equal/verify, None otherwise

        Returns:
            Row id if inserted, None if the same query was already recorded
        """
        if kind not in KINDS:
            raise ValueError(f"unknown result kind {kind!r}")
        try:
            with sqlite3.connect(self.db_path) as conn:
                cursor = conn.execute('''
                    INSERT INTO results (kind, query, result, verdict, created_at)
                    VALUES (?, ?, ?, ?, ?)
                ''', (
                    kind,
                    query,
                    result,
                    None if verdict is None else int(verdict),
                    datetime.now().isoformat(),
                ))
                conn.commit()
                return cursor.lastrowid
        except sqlite3.IntegrityError:
            logger.debug(f"{kind} result for {query!r} already recorded")
            return None

    def get_results(self, kind: Optional[str] = None, limit: Optional[int] = None) -> List[Dict]:
        """Journal entries, newest first, optionally filtered by kind."""
        with sqlite3.connect(self.db_path) as conn:
            conn.row_factory = sqlite3.Row

            query = "SELECT * FROM results"
            params = []

            if kind:
                query += " WHERE kind = ?"
                params.append(kind)

            query += " ORDER BY id DESC"

            if limit:
                query += " LIMIT ?"
                params.append(limit)

            rows = conn.execute(query, params).fetchall()

        results = []
        for row in rows:
            entry = dict(row)
            entry["verdict"] = None if entry["verdict"] is None else bool(entry["verdict"])
            results.append(entry)
        return results

    def get_stats(self) -> Dict:
        with sqlite3.connect(self.db_path) as conn:
            total, true, false = conn.execute('''
                SELECT
                    COUNT(*) as total,
                    COUNT(CASE WHEN verdict = 1 THEN 1 END) as true_count,
                    COUNT(CASE WHEN verdict = 0 THEN 1 END) as false_count
                FROM results
            ''').fetchone()
            per_kind = dict(conn.execute("SELECT kind, COUNT(*) FROM results GROUP BY kind").fetchall())

        stats = {"total": total, "true": true, "false": false}
        for kind in KINDS:
            stats[kind] = per_kind.get(kind, 0)
        return stats
