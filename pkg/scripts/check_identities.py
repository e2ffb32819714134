#!/usr/bin/env python3
"""
hyperseq batch identity checker

Reads a file of identities, one "LEFT == RIGHT" per line (blank lines and
lines starting with # are skipped), decides each one exactly and journals
the verdicts in the result database. Exits with status 1 if any identity is
false and 2 if a line cannot be parsed.
"""

import sys
import os
import argparse
import json
import logging
from typing import Tuple

# Add the parent directory to the path so we can import hyperseq modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from hyperseq.errors import HyperSeqError
from hyperseq.parser import parse_hts
from hyperseq.recurrence import hts_equal
from hyperseq.render import render
from hyperseq.store import ResultStore

logger = logging.getLogger(__name__)


def split_identity(line: str) -> Tuple[str, str]:
    """Split "LEFT == RIGHT" into its two sides."""
    parts = line.split("==")
    if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
        raise ValueError(f"expected 'LEFT == RIGHT', got {line!r}")
    return parts[0].strip(), parts[1].strip()


def check_file(path: str, db: ResultStore, var: str = "n") -> dict:
    """
    Decide every identity in a file.

    Args:
        path: identity file
        db: journal receiving one "equal" entry per identity
        var: index variable name

    Returns:
        Counts of true, false and unreadable identities
    """
    counts = {"true": 0, "false": 0, "errors": 0, "new": 0}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                left_text, right_text = split_identity(line)
                left, right = parse_hts(left_text, var), parse_hts(right_text, var)
                verdict = hts_equal(left, right)
            except (ValueError, HyperSeqError) as e:
                logger.error(f"❌ line {lineno}: {e}")
                counts["errors"] += 1
                continue

            query = f"{render(left, 'text', var)} == {render(right, 'text', var)}"
            if db.record("equal", query, json.dumps(verdict), verdict):
                counts["new"] += 1
            if verdict:
                counts["true"] += 1
                logger.info(f"✅ line {lineno}: {line}")
            else:
                counts["false"] += 1
                logger.warning(f"⚠️  line {lineno} is false: {line}")
    return counts


def main(argv=None) -> int:
    """Main function to run a batch of identity checks."""
    parser = argparse.ArgumentParser(description='Check identities between hypergeometric-type expressions')
    parser.add_argument('file', help='file with one LEFT == RIGHT identity per line')
    parser.add_argument('--db', default='hyperseq.db', help='result journal database')
    parser.add_argument('--var', default='n', help='index variable name')
    parser.add_argument('--log-file', default='hyperseq.log', help='log file')
    args = parser.parse_args(argv)

    # Set up logging
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(args.log_file),
            logging.StreamHandler()
        ]
    )

    logger.info(f"🚀 Checking identities in {args.file}")
    db = ResultStore(args.db)
    counts = check_file(args.file, db, var=args.var)
    stats = db.get_stats()

    # Summary
    logger.info("="*50)
    logger.info("📋 IDENTITY SUMMARY")
    logger.info("="*50)
    logger.info(f"✅ True: {counts['true']}")
    logger.info(f"❌ False: {counts['false']}")
    logger.info(f"⚠️  Unreadable: {counts['errors']}")
    logger.info(f"💾 Newly journaled: {counts['new']}")
    logger.info(f"📈 Results in database: {stats['total']}")
    logger.info("="*50)

    if counts['errors']:
        return 2
    return 1 if counts['false'] else 0


if __name__ == "__main__":
    sys.exit(main())
