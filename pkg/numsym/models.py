from datetime import datetime

from sqlalchemy import BigInteger, Boolean, Column, DateTime, Float, Integer, String, Text

from numsym.database import Base


class GroupOrderRecord(Base):
    """Verified order of G_P, stored at the first verified run and reused as a fixture"""
    __tablename__ = "group_order_records"

    id = Column(Integer, primary_key=True, index=True)
    fingerprint = Column(String(64), unique=True, index=True)

    source = Column(String(200), index=True)
    length = Column(Integer, index=True)
    path_count = Column(BigInteger)
    # orders of large groups exceed 64 bits
    order = Column(Text)
    order_method = Column(String(20))
    cap_exceeded = Column(Boolean, default=False)

    created_at = Column(DateTime, default=datetime.utcnow)


class FrequencyRecord(Base):
    __tablename__ = "frequency_records"

    id = Column(Integer, primary_key=True, index=True)
    fingerprint = Column(String(64), unique=True, index=True)

    sampler = Column(String(200), index=True)
    ideal = Column(String(100), index=True)
    n_steps = Column(Integer)
    replicas = Column(Integer)
    seed = Column(BigInteger)
    estimate = Column(Float)
    stderr = Column(Float)

    created_at = Column(DateTime, default=datetime.utcnow)
