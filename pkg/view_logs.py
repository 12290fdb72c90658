#!/usr/bin/env python3
"""
Log viewer for torb: recent entries, request and search statistics, clearing
"""

import sys
from typing import Dict, Iterable

from torb.services.debug_logger import DebugLogger

# message prefix written by DebugLogger -> label in the statistics
EVENT_KINDS = {
    'Request |': 'HTTP requests',
    'Genus Job |': 'genus job events',
    'Search |': 'search events',
}

USAGE = """   python view_logs.py recent [lines]  - View recent logs
   python view_logs.py stats          - Level, request and search counts
   python view_logs.py clear          - Clear the log file"""


def count_levels(lines: Iterable[str]) -> Dict[str, int]:
    """Count entries per level in the detailed 'time | name | level | ...' format"""
    level_counts: Dict[str, int] = {}
    for line in lines:
        parts = line.split('|')
        if len(parts) >= 4:
            level = parts[2].strip()
            level_counts[level] = level_counts.get(level, 0) + 1
    return level_counts


def count_events(lines: Iterable[str]) -> Dict[str, int]:
    """Count request, job and search entries, plus searches that ran out of budget"""
    counts = dict.fromkeys(list(EVENT_KINDS.values()) + ['exhausted budgets'], 0)
    for line in lines:
        for prefix, label in EVENT_KINDS.items():
            if prefix in line:
                counts[label] += 1
        if 'budget exhausted' in line:
            counts['exhausted budgets'] += 1
    return counts


def view_recent_logs(lines: int = 50):
    print(f"📋 Recent Log Entries (Last {lines} lines)")
    print("=" * 60)

    recent_logs = DebugLogger.get_recent_logs(lines)
    if not recent_logs:
        print(f"❌ No entries in {DebugLogger.get_log_file_path()}")
        return

    for line in recent_logs:
        print(line.rstrip())


def view_log_stats():
    lines = DebugLogger.get_recent_logs(sys.maxsize)
    print(f"📊 Log Statistics: {DebugLogger.get_log_file_path()}")
    print("=" * 60)
    if not lines:
        print("❌ No entries")
        return

    print(f"📄 Entries: {len(lines):,}")
    print("\n📈 Levels:")
    for level, count in sorted(count_levels(lines).items()):
        print(f"   {level}: {count:,} ({100 * count / len(lines):.1f}%)")
    print("\n🔎 Events:")
    for label, count in count_events(lines).items():
        print(f"   {label}: {count:,}")


def main():
    command = sys.argv[1].lower() if len(sys.argv) > 1 else "recent"
    if command == "recent":
        view_recent_logs(int(sys.argv[2]) if len(sys.argv) > 2 else 30)
    elif command == "stats":
        view_log_stats()
    elif command == "clear":
        DebugLogger.clear_logs()
        print("✅ Log file cleared")
    else:
        print("❌ Unknown command. Available commands:")
        print(USAGE)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
