// Update scheduling for the two interaction speeds the UI needs:
//  - immediate: point-sized updates (drag, psi slider fiber), every event
//  - debounced latest-wins: expensive recomputation (torus meshes), at most
//    one request in flight, intermediate requests collapsed.

export type Task<A, R> = (arg: A) => Promise<R>

export interface SchedulerOptions {
  delayMs?: number
  setTimeoutFn?: typeof setTimeout
  clearTimeoutFn?: typeof clearTimeout
}

/**
 * Debounce calls to an async task and deliver only the newest result.
 *
 * `request(arg)` restarts the debounce timer.  When it fires, the task runs
 * with the most recent argument; if more requests arrive while the task is
 * in flight, exactly one follow-up run happens afterwards with the newest
 * argument, and results of superseded runs are dropped.
 */
export class DebouncedLatest<A, R> {
  private readonly task: Task<A, R>
  private readonly onResult: (result: R, arg: A) => void
  private readonly onError: (err: unknown) => void
  private readonly delayMs: number
  private readonly setTimeoutFn: typeof setTimeout
  private readonly clearTimeoutFn: typeof clearTimeout

  private timer: ReturnType<typeof setTimeout> | null = null
  private pendingArg: A | null = null
  private inFlight = false
  private generation = 0

  constructor(
    task: Task<A, R>,
    onResult: (result: R, arg: A) => void,
    onError: (err: unknown) => void = () => {},
    options: SchedulerOptions = {},
  ) {
    this.task = task
    this.onResult = onResult
    this.onError = onError
    this.delayMs = options.delayMs ?? 150
    this.setTimeoutFn = options.setTimeoutFn ?? setTimeout
    this.clearTimeoutFn = options.clearTimeoutFn ?? clearTimeout
  }

  request(arg: A): void {
    this.pendingArg = arg
    if (this.timer !== null) this.clearTimeoutFn(this.timer)
    this.timer = this.setTimeoutFn(() => {
      this.timer = null
      void this.launch()
    }, this.delayMs)
  }

  private async launch(): Promise<void> {
    if (this.inFlight || this.pendingArg === null) return
    const arg = this.pendingArg
    this.pendingArg = null
    const gen = ++this.generation
    this.inFlight = true
    try {
      const result = await this.task(arg)
      // Stale if a newer request arrived while this run was in flight.
      if (gen === this.generation && this.pendingArg === null) {
        this.onResult(result, arg)
      }
    } catch (err) {
      if (gen === this.generation && this.pendingArg === null) this.onError(err)
    } finally {
      this.inFlight = false
      // A newer request arrived while we were busy: run it now.
      if (this.pendingArg !== null && this.timer === null) void this.launch()
    }
  }
}

/**
 * Immediate latest-wins channel: every request starts right away, but only
 * the newest result is delivered (stale responses are discarded).
 */
export class LatestWins<A, R> {
  private readonly task: Task<A, R>
  private readonly onResult: (result: R, arg: A) => void
  private readonly onError: (err: unknown) => void
  private generation = 0

  constructor(
    task: Task<A, R>,
    onResult: (result: R, arg: A) => void,
    onError: (err: unknown) => void = () => {},
  ) {
    this.task = task
    this.onResult = onResult
    this.onError = onError
  }

  request(arg: A): void {
    const gen = ++this.generation
    this.task(arg).then(
      (result) => {
        if (gen === this.generation) this.onResult(result, arg)
      },
      (err) => {
        if (gen === this.generation) this.onError(err)
      },
    )
  }
}
