#!/usr/bin/env python3
"""
hyperseq Result Journal Query Tool

Simple CLI tool to list journaled results and statistics.
"""

import sys
import os
import argparse

# Add the parent directory to the path so we can import hyperseq modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from hyperseq.store import KINDS, ResultStore


def display_result(entry, detailed=False):
    """Display one journal entry."""
    verdict = ""
    if entry['verdict'] is not None:
        verdict = " ✅" if entry['verdict'] else " ❌"
    print(f"📍 [{entry['id']}] {entry['kind']}{verdict}")
    print(f"   ❓ {entry['query']}")
    if detailed:
        print(f"   📝 {entry['result']}")
        print(f"   🕒 {entry['created_at']}")
    print()


def main(argv=None):
    """Main CLI function."""
    parser = argparse.ArgumentParser(description='Query the hyperseq result journal')
    parser.add_argument('--kind', choices=KINDS, help='Filter by result kind')
    parser.add_argument('--limit', type=int, default=10, help='Maximum number of results')
    parser.add_argument('--detailed', '-d', action='store_true', help='Show results and timestamps')
    parser.add_argument('--stats', '-s', action='store_true', help='Show journal statistics')
    parser.add_argument('--db', default='hyperseq.db', help='result journal database')

    args = parser.parse_args(argv)

    db = ResultStore(args.db)

    if args.stats:
        stats = db.get_stats()
        print("📊 JOURNAL STATISTICS")
        print("=" * 30)
        print(f"Total results: {stats['total']}")
        for kind in KINDS:
            print(f"{kind}: {stats[kind]}")
        print(f"True verdicts: {stats['true']}")
        print(f"False verdicts: {stats['false']}")
        print()

    results = db.get_results(kind=args.kind, limit=args.limit)

    if not results:
        print("❌ No results found matching criteria")
        return

    print(f"🔍 Found {len(results)} results:")
    print("=" * 50)

    for entry in results:
        display_result(entry, detailed=args.detailed)


if __name__ == "__main__":
    main()
