"""Parsing, validation and pseudonymization of raw transaction records.

The canonical input is delimited UTF-8 text with a header row naming nine
fields: timestamp, sender account/institution/country, receiver
account/institution/country, amount and currency.  Amounts are integer minor
currency units (cents); a dataset is assumed to be single-currency unless a
conversion table is supplied.
"""

from __future__ import annotations

import csv
import hashlib
import hmac
import io
import string
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from itertools import product
from pathlib import Path
from typing import IO, Iterable, Mapping

HEADER = (
    "timestamp",
    "sender_account",
    "sender_institution",
    "sender_country",
    "receiver_account",
    "receiver_institution",
    "receiver_country",
    "amount",
    "currency",
)

# Country fields are two uppercase alphanumerics: real ISO codes plus the
# pre-anonymized labels (C1, C2, ...) that upstream data providers emit.
_CODE_ALPHABET = string.ascii_uppercase + string.digits
_COUNTRY_CODES = tuple(a + b for a, b in product(_CODE_ALPHABET, repeat=2))


class IngestError(Exception):
    """Fatal ingest failure: unreadable stream or unusable header."""


@dataclass(frozen=True, slots=True)
class TransactionRecord:
    """One wire transfer, timestamps at second precision in UTC."""

    timestamp: datetime
    sender_account: str
    sender_institution: str
    sender_country: str
    receiver_account: str
    receiver_institution: str
    receiver_country: str
    amount: int
    currency: str


@dataclass(frozen=True, slots=True)
class RowError:
    """A rejected input row: 1-based data row number plus the reason."""

    row: int
    reason: str


def _parse_timestamp(raw: str) -> datetime:
    """Parse an ISO-8601 UTC instant, truncated to second precision."""
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None or ts.utcoffset().total_seconds() != 0:
        raise ValueError(f"timestamp {raw!r} is not UTC")
    return ts.astimezone(timezone.utc).replace(microsecond=0)


def _is_country(value: str) -> bool:
    return len(value) == 2 and all(c in _CODE_ALPHABET for c in value)


def _is_currency(value: str) -> bool:
    return len(value) == 3 and all(c in string.ascii_uppercase for c in value)


def parse_transactions(
    source: IO[bytes] | IO[str] | str | Path,
    delimiter: str = ",",
    currency_rates: Mapping[str, float] | None = None,
) -> tuple[list[TransactionRecord], list[RowError]]:
    """Parse delimited text into records plus per-row errors.

    Malformed rows never abort the parse; each yields one RowError with its
    1-based data row number.  The first well-formed row fixes the dataset
    currency; later rows in another currency are row errors unless
    ``currency_rates`` maps their code to a conversion factor into the
    dataset currency (converted amounts are rounded to integer minor units).

    Raises IngestError if the stream is unreadable or the header does not
    contain all nine canonical columns.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return parse_transactions(fh, delimiter, currency_rates)
    try:
        if isinstance(source.read(0), bytes):
            source = io.TextIOWrapper(source, encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestError(f"unreadable input: {exc}") from exc

    try:
        reader = csv.reader(source, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError("input is empty: missing header row") from None
        rows = list(reader)
    except (UnicodeDecodeError, csv.Error, OSError) as exc:
        raise IngestError(f"unreadable input: {exc}") from exc

    header = [h.strip() for h in header]
    missing = [name for name in HEADER if name not in header]
    if missing:
        raise IngestError(f"missing header column(s): {', '.join(missing)}")
    index = {name: header.index(name) for name in HEADER}

    records: list[TransactionRecord] = []
    errors: list[RowError] = []
    dataset_currency: str | None = None

    for row_no, row in enumerate(rows, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            errors.append(RowError(row_no, f"expected {len(header)} fields, got {len(row)}"))
            continue
        field = {name: row[index[name]].strip() for name in HEADER}

        try:
            ts = _parse_timestamp(field["timestamp"])
        except ValueError as exc:
            errors.append(RowError(row_no, f"bad timestamp: {exc}"))
            continue
        try:
            amount = int(field["amount"])
        except ValueError:
            errors.append(RowError(row_no, f"non-integer amount {field['amount']!r}"))
            continue
        if amount < 0:
            errors.append(RowError(row_no, f"negative amount {amount}"))
            continue
        bad_code = next(
            (
                name
                for name in ("sender_country", "receiver_country")
                if not _is_country(field[name])
            ),
            None,
        )
        if bad_code is not None:
            errors.append(RowError(row_no, f"bad country code {field[bad_code]!r} in {bad_code}"))
            continue
        currency = field["currency"]
        if not _is_currency(currency):
            errors.append(RowError(row_no, f"bad currency code {currency!r}"))
            continue
        if any(not field[n] for n in HEADER[1:7]):
            errors.append(RowError(row_no, "empty entity id"))
            continue

        if dataset_currency is None:
            dataset_currency = currency
        elif currency != dataset_currency:
            if currency_rates and currency in currency_rates:
                amount = round(amount * currency_rates[currency])
            else:
                errors.append(
                    RowError(row_no, f"currency {currency} differs from dataset currency {dataset_currency}")
                )
                continue
            currency = dataset_currency

        records.append(
            TransactionRecord(
                timestamp=ts,
                sender_account=field["sender_account"],
                sender_institution=field["sender_institution"],
                sender_country=field["sender_country"],
                receiver_account=field["receiver_account"],
                receiver_institution=field["receiver_institution"],
                receiver_country=field["receiver_country"],
                amount=amount,
                currency=currency,
            )
        )
    return records, errors


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def serialize_transactions(records: Iterable[TransactionRecord], out: IO[str], delimiter: str = ",") -> None:
    """Write records in the canonical schema; round-trips through parse_transactions."""
    writer = csv.writer(out, delimiter=delimiter, lineterminator="\n")
    writer.writerow(HEADER)
    for r in records:
        writer.writerow(
            (
                format_timestamp(r.timestamp),
                r.sender_account,
                r.sender_institution,
                r.sender_country,
                r.receiver_account,
                r.receiver_institution,
                r.receiver_country,
                r.amount,
                r.currency,
            )
        )


def write_transactions(records: Iterable[TransactionRecord], path: str | Path, delimiter: str = ",") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        serialize_transactions(records, fh, delimiter)


@dataclass(frozen=True)
class PseudonymMap:
    """Injective, salt-keyed mapping from original ids to stable pseudonyms."""

    mapping: Mapping[tuple[str, str], str]
    salt: bytes

    def get(self, role: str, original: str) -> str:
        return self.mapping[(role, original)]

    def write(self, path: str | Path, delimiter: str = ",") -> None:
        """Audit export: two columns, original then pseudonym, sorted."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
            writer.writerow(("original", "pseudonym"))
            for (_, original), pseudonym in sorted(self.mapping.items(), key=lambda kv: (kv[0][1], kv[1])):
                writer.writerow((original, pseudonym))


def _keyed_digest(salt: bytes, role: str, value: str) -> str:
    return hmac.new(salt, f"{role}:{value}".encode("utf-8"), hashlib.sha256).hexdigest()


def _country_permutation(salt: bytes) -> dict[str, str]:
    # Country pseudonyms must stay valid 2-letter codes, so map through a
    # salt-keyed permutation of the full code space instead of hash truncation.
    ranked = sorted(_COUNTRY_CODES, key=lambda code: (_keyed_digest(salt, "country", code), code))
    return dict(zip(_COUNTRY_CODES, ranked))


_ROLE_PREFIX = {"account": "A", "institution": "I"}


def pseudonymize(
    records: Iterable[TransactionRecord], salt: bytes
) -> tuple[list[TransactionRecord], PseudonymMap]:
    """Replace all six id fields with salt-keyed deterministic pseudonyms.

    Accounts and institutions become a role prefix plus 12 hex characters of
    a keyed hash; countries are sent through a salt-keyed permutation of the
    two-letter code space so the output still parses under the canonical
    schema.  Amounts and timestamps are untouched.  The returned map is the
    audit trail; a digest collision (never observed at these sizes) raises.
    """
    if not salt:
        raise ValueError("salt must be non-empty")
    countries = _country_permutation(salt)
    mapping: dict[tuple[str, str], str] = {}
    seen: dict[tuple[str, str], str] = {}

    def assign(role: str, original: str) -> str:
        key = (role, original)
        hit = mapping.get(key)
        if hit is not None:
            return hit
        if role == "country":
            pseudonym = countries[original]
        else:
            pseudonym = _ROLE_PREFIX[role] + _keyed_digest(salt, role, original)[:12]
        owner = seen.get((role, pseudonym))
        if owner is not None and owner != original:
            raise ValueError(f"pseudonym collision for {role} ids {owner!r} and {original!r}")
        seen[(role, pseudonym)] = original
        mapping[key] = pseudonym
        return pseudonym

    out: list[TransactionRecord] = []
    for r in records:
        out.append(
            replace(
                r,
                sender_account=assign("account", r.sender_account),
                sender_institution=assign("institution", r.sender_institution),
                sender_country=assign("country", r.sender_country),
                receiver_account=assign("account", r.receiver_account),
                receiver_institution=assign("institution", r.receiver_institution),
                receiver_country=assign("country", r.receiver_country),
            )
        )
    return out, PseudonymMap(mapping=mapping, salt=salt)
