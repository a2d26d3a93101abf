"""
Hypertoric Duality Engine - Cache Module
"""

import json
from pathlib import Path
from datetime import datetime, timedelta
from typing import Dict, Any, Optional
import hashlib
import logging

from config import CACHE_DIR, CACHE_TTL_HOURS, ENABLE_CACHE

logger = logging.getLogger(__name__)


def document_hash(document: Dict[str, Any]) -> str:
    """md5 of the canonical JSON form of an input document"""
    canonical = json.dumps(document, sort_keys=True, separators=(',', ':'))
    return hashlib.md5(canonical.encode('utf-8')).hexdigest()


class ReportCache:
    """Cache of finished reports, keyed on input document, command and options"""

    def __init__(self, cache_dir: str = CACHE_DIR, ttl_hours: int = CACHE_TTL_HOURS):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.ttl_hours = ttl_hours
        self.enabled = ENABLE_CACHE
        self.stats = {'hits': 0, 'misses': 0, 'writes': 0}

    def _get_cache_key(self, input_hash: str, command: str, options: Dict[str, Any]) -> str:
        combined = f"{input_hash}_{command}_{json.dumps(options, sort_keys=True, default=str)}"
        return hashlib.md5(combined.encode()).hexdigest()

    def _get_cache_path(self, cache_key: str) -> Path:
        return self.cache_dir / f"{cache_key}.json"

    def _is_expired(self, entry: Dict[str, Any], now: datetime) -> bool:
        cached_time = datetime.fromisoformat(entry['cached_at'])
        ttl = entry.get('ttl_hours', self.ttl_hours)
        return now > cached_time + timedelta(hours=ttl)

    def get(self, input_hash: str, command: str, options: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        if not self.enabled:
            return None
        cache_path = self._get_cache_path(self._get_cache_key(input_hash, command, options))
        if not cache_path.exists():
            self.stats['misses'] += 1
            return None
        try:
            with open(cache_path, 'r', encoding='utf-8') as f:
                entry = json.load(f)
            if self._is_expired(entry, datetime.now()):
                self.stats['misses'] += 1
                return None
            self.stats['hits'] += 1
            logger.info(f"💾 Cache hit for {command} on {input_hash[:8]}")
            return entry['report']
        except (OSError, ValueError, KeyError) as e:
            logger.debug(f"Unreadable cache entry {cache_path}: {e}")
            self.stats['misses'] += 1
            return None

    def set(self, input_hash: str, command: str, options: Dict[str, Any], report: Dict[str, Any]) -> bool:
        if not self.enabled:
            return False
        cache_path = self._get_cache_path(self._get_cache_key(input_hash, command, options))
        try:
            entry = {
                'input_hash': input_hash,
                'command': command,
                'options': options,
                'report': report,
                'cached_at': datetime.now().isoformat(),
                'ttl_hours': self.ttl_hours
            }
            with open(cache_path, 'w', encoding='utf-8') as f:
                json.dump(entry, f, indent=2, ensure_ascii=False, default=str)
            self.stats['writes'] += 1
            return True
        except (OSError, TypeError) as e:
            logger.warning(f"⚠️ Could not cache {command} report: {e}")
            return False

    def invalidate(self, input_hash: str) -> int:
        """Drop every cached report for one input document"""
        deleted = 0
        for cache_file in self.cache_dir.glob('*.json'):
            try:
                with open(cache_file, 'r', encoding='utf-8') as f:
                    entry = json.load(f)
                if entry.get('input_hash') == input_hash:
                    cache_file.unlink()
                    deleted += 1
            except (OSError, ValueError):
                pass
        return deleted

    def clear_expired(self) -> int:
        deleted_count = 0
        now = datetime.now()
        for cache_file in self.cache_dir.glob('*.json'):
            try:
                with open(cache_file, 'r', encoding='utf-8') as f:
                    entry = json.load(f)
                if self._is_expired(entry, now):
                    cache_file.unlink()
                    deleted_count += 1
            except (OSError, ValueError, KeyError):
                pass
        return deleted_count

    def get_stats(self) -> Dict[str, Any]:
        total_requests = self.stats['hits'] + self.stats['misses']
        hit_rate = self.stats['hits'] / total_requests if total_requests > 0 else 0
        files = list(self.cache_dir.glob('*.json'))
        cache_size_mb = sum(f.stat().st_size for f in files) / (1024 * 1024)
        active_entries = 0
        expired_entries = 0
        now = datetime.now()
        for cache_file in files:
            try:
                with open(cache_file, 'r', encoding='utf-8') as f:
                    entry = json.load(f)
                if self._is_expired(entry, now):
                    expired_entries += 1
                else:
                    active_entries += 1
            except (OSError, ValueError, KeyError):
                pass
        return {
            'enabled': self.enabled,
            'total_entries': active_entries + expired_entries,
            'active_entries': active_entries,
            'expired_entries': expired_entries,
            'cache_size_mb': round(cache_size_mb, 2),
            'hits': self.stats['hits'],
            'misses': self.stats['misses'],
            'writes': self.stats['writes'],
            'hit_rate': hit_rate,
            'ttl_hours': self.ttl_hours
        }

    def disable(self):
        self.enabled = False

    def enable(self):
        self.enabled = True

    def clear_all(self) -> int:
        deleted_count = 0
        for cache_file in self.cache_dir.glob('*.json'):
            try:
                cache_file.unlink()
                deleted_count += 1
            except OSError:
                pass
        return deleted_count
