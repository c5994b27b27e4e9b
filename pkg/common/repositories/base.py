from typing import Optional


class BaseRepository:
    """
    In-memory registry of one record type, scoped to a single simulation run.

    Subclasses set MODEL and, for registries with one record per identity, KEY (a field
    name or a tuple of field names). Saving a record whose key is already present
    replaces it. Without KEY the repository is an append-only archive.
    """
    MODEL = None
    KEY = None

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.MODEL is None:
            raise TypeError(f"Subclasses of {cls.__name__} must define the MODEL attribute.")

    def __init__(self):
        self._records = []
        self._index = {}

    def _key_of(self, instance):
        if isinstance(self.KEY, tuple):
            return tuple(getattr(instance, name) for name in self.KEY)
        return getattr(instance, self.KEY)

    def _key_from_filters(self, filters: dict):
        fields = self.KEY if isinstance(self.KEY, tuple) else (self.KEY,)
        if self.KEY is None or set(filters) != set(fields):
            return None
        if isinstance(self.KEY, tuple):
            return tuple(filters[name] for name in self.KEY)
        return filters[self.KEY]

    def save(self, instance):
        if not isinstance(instance, self.MODEL):
            raise TypeError(f"{type(self).__name__} stores {self.MODEL.__name__}, got {type(instance).__name__}")
        if self.KEY is None:
            self._records.append(instance)
            return instance
        key = self._key_of(instance)
        position = self._index.get(key)
        if position is None:
            self._index[key] = len(self._records)
            self._records.append(instance)
        else:
            self._records[position] = instance
        return instance

    @staticmethod
    def _matches(instance, filters: dict) -> bool:
        return all(getattr(instance, name) == value for name, value in filters.items())

    def get_one(self, filters: dict) -> Optional[object]:
        key = self._key_from_filters(filters)
        if key is not None:
            position = self._index.get(key)
            return None if position is None else self._records[position]
        for instance in self._records:
            if self._matches(instance, filters):
                return instance
        return None

    def get_many(self, filters: Optional[dict] = None) -> list:
        if not filters:
            return list(self._records)
        return [instance for instance in self._records if self._matches(instance, filters)]

    def exists(self, filters: dict) -> bool:
        return self.get_one(filters) is not None

    def __len__(self):
        return len(self._records)
