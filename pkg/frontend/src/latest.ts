// Stale-response guard: results are accepted only if they belong to the most
// recently issued token, so a slow early response can never overwrite a
// newer one.

export class LatestGate {
  private current = 0;

  issue(): number {
    this.current += 1;
    return this.current;
  }

  isCurrent(token: number): boolean {
    return token === this.current;
  }
}
