// Trailing debounce for slider drags: the pending call fires after the quiet
// period, and flush() runs it immediately (commit on release).

export class Debouncer {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: (() => void) | null = null;

  constructor(private delayMs: number) {}

  schedule(fn: () => void): void {
    this.pending = fn;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      const run = this.pending;
      this.pending = null;
      run?.();
    }, this.delayMs);
  }

  flush(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const run = this.pending;
    this.pending = null;
    run?.();
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
  }

  get idle(): boolean {
    return this.timer === null && this.pending === null;
  }
}
