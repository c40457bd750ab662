"""Recording and looking up verified results in the fixture store."""
import hashlib
import logging
from typing import Optional

from numsym.database import get_session, init_db
from numsym.models import FrequencyRecord, GroupOrderRecord
from numsym.schemas import FrequencyReport, GroupOrderRow

logger = logging.getLogger("numsym.store")


def fingerprint(*parts) -> str:
    """Stable key for deduplication"""
    return hashlib.sha256("|".join(map(str, parts)).encode()).hexdigest()


def record_group_order(row: GroupOrderRow, url: Optional[str] = None) -> bool:
    """Store the order as a fixture. Returns False when a fixture already exists."""
    init_db(url)
    key = fingerprint("group", row.source, row.length)
    db = get_session(url)
    try:
        if db.query(GroupOrderRecord).filter(GroupOrderRecord.fingerprint == key).first():
            return False
        db.add(GroupOrderRecord(
            fingerprint=key,
            source=row.source,
            length=row.length,
            path_count=row.path_count,
            order=str(row.order),
            order_method=row.order_method,
            cap_exceeded=row.cap_exceeded,
        ))
        db.commit()
        logger.info(f"💾 Recorded |G_P| = {row.order} for {row.source} at length {row.length}")
        return True
    except Exception as e:
        db.rollback()
        logger.error(f"❌ Could not record group order: {e}")
        raise
    finally:
        db.close()


def lookup_group_order(source: str, length: int, url: Optional[str] = None) -> Optional[int]:
    init_db(url)
    db = get_session(url)
    try:
        record = (db.query(GroupOrderRecord)
                  .filter(GroupOrderRecord.fingerprint == fingerprint("group", source, length))
                  .first())
        return int(record.order) if record else None
    finally:
        db.close()


def check_group_order(row: GroupOrderRow, url: Optional[str] = None) -> Optional[bool]:
    """True/False against the stored fixture, None when nothing was recorded yet."""
    stored = lookup_group_order(row.source, row.length, url)
    if stored is None:
        return None
    if stored != row.order:
        logger.error(f"❌ {row.source} length {row.length}: order {row.order}, fixture {stored}")
    return stored == row.order


def record_frequency(report: FrequencyReport, url: Optional[str] = None) -> bool:
    init_db(url)
    key = fingerprint("freq", report.sampler, report.ideal, report.n_steps, report.replicas, report.seed)
    db = get_session(url)
    try:
        if db.query(FrequencyRecord).filter(FrequencyRecord.fingerprint == key).first():
            return False
        db.add(FrequencyRecord(
            fingerprint=key,
            sampler=report.sampler,
            ideal=str(report.ideal),
            n_steps=report.n_steps,
            replicas=report.replicas,
            seed=report.seed,
            estimate=report.estimate,
            stderr=report.stderr,
        ))
        db.commit()
        return True
    except Exception as e:
        db.rollback()
        logger.error(f"❌ Could not record frequency report: {e}")
        raise
    finally:
        db.close()
