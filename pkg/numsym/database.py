import logging
from functools import lru_cache
from typing import Optional

from sqlalchemy import create_engine, text
from sqlalchemy.orm import declarative_base, sessionmaker

from numsym.config import get_settings

logger = logging.getLogger("numsym.database")

Base = declarative_base()


def get_engine(url: Optional[str] = None):
    return _engine_for(url or get_settings().database_url)


@lru_cache(maxsize=8)
def _engine_for(url: str):
    if url.startswith("sqlite"):
        engine = create_engine(url, connect_args={"check_same_thread": False}, echo=False)
        logger.info(f"✅ SQLite fixture store: {url}")
    else:
        engine = create_engine(url, pool_pre_ping=True, echo=False)
        logger.info("✅ Fixture store configured")
    return engine


def get_session(url: Optional[str] = None):
    """Session bound to the fixture store; callers close it."""
    return sessionmaker(autocommit=False, autoflush=False, bind=get_engine(url))()


def init_db(url: Optional[str] = None) -> None:
    """Create all tables in the database"""
    import numsym.models  # noqa: F401  registers the tables on Base

    Base.metadata.create_all(bind=get_engine(url))
    logger.info("✅ Fixture tables checked/created")


def check_connection(url: Optional[str] = None) -> bool:
    try:
        with get_engine(url).connect() as conn:
            conn.execute(text("SELECT 1"))
        return True
    except Exception as e:
        logger.error(f"❌ Fixture store connection failed: {e}")
        return False
