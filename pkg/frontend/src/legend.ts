/** Legend visibility state as an immutable set of hidden keys. */

export function toggleKey(
  hidden: ReadonlySet<string>,
  key: string,
): Set<string> {
  const next = new Set(hidden);
  if (next.has(key)) next.delete(key);
  else next.add(key);
  return next;
}

export function allVisible(): Set<string> {
  return new Set();
}
