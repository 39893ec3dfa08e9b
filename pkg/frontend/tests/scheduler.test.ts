import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest'
import { DebouncedLatest, LatestWins } from '../src/scheduler'

beforeEach(() => {
  vi.useFakeTimers()
})

afterEach(() => {
  vi.useRealTimers()
})

describe('DebouncedLatest', () => {
  it('collapses a burst of requests into one run with the newest argument', async () => {
    const calls: number[] = []
    const results: number[] = []
    const sched = new DebouncedLatest<number, number>(
      async (n) => {
        calls.push(n)
        return n * 10
      },
      (r) => results.push(r),
      () => {},
      { delayMs: 150 },
    )
    sched.request(1)
    vi.advanceTimersByTime(50)
    sched.request(2)
    vi.advanceTimersByTime(50)
    sched.request(3)
    await vi.advanceTimersByTimeAsync(150)
    expect(calls).toEqual([3])
    expect(results).toEqual([30])
  })

  it('does not fire before the debounce delay', async () => {
    const calls: number[] = []
    const sched = new DebouncedLatest<number, void>(
      async (n) => {
        calls.push(n)
      },
      () => {},
      () => {},
      { delayMs: 150 },
    )
    sched.request(1)
    await vi.advanceTimersByTimeAsync(149)
    expect(calls).toEqual([])
    await vi.advanceTimersByTimeAsync(1)
    expect(calls).toEqual([1])
  })

  it('keeps at most one task in flight and replays the newest afterwards', async () => {
    const resolvers: Array<(v: number) => void> = []
    const calls: number[] = []
    const results: number[] = []
    const sched = new DebouncedLatest<number, number>(
      (n) =>
        new Promise<number>((resolve) => {
          calls.push(n)
          resolvers.push(resolve)
        }),
      (r) => results.push(r),
      () => {},
      { delayMs: 10 },
    )
    sched.request(1)
    await vi.advanceTimersByTimeAsync(10)
    expect(calls).toEqual([1])

    // While #1 is still running, two more requests arrive.
    sched.request(2)
    await vi.advanceTimersByTimeAsync(10)
    sched.request(3)
    await vi.advanceTimersByTimeAsync(10)
    expect(calls).toEqual([1]) // still only one in flight

    resolvers[0](100)
    await vi.runAllTimersAsync()
    expect(calls).toEqual([1, 3]) // 2 was collapsed away
    resolvers[1](300)
    await vi.runAllTimersAsync()
    // The first result is stale by the time it lands and must be dropped.
    expect(results).toEqual([300])
  })

  it('routes task failures to onError', async () => {
    const errors: unknown[] = []
    const sched = new DebouncedLatest<number, void>(
      async () => {
        throw new Error('boom')
      },
      () => {},
      (e) => errors.push(e),
      { delayMs: 10 },
    )
    sched.request(1)
    await vi.runAllTimersAsync()
    expect(errors).toHaveLength(1)
    expect((errors[0] as Error).message).toBe('boom')
  })
})

describe('LatestWins', () => {
  it('starts every request immediately but delivers only the newest result', async () => {
    const resolvers: Array<(v: string) => void> = []
    const delivered: string[] = []
    const chan = new LatestWins<number, string>(
      () => new Promise((resolve) => resolvers.push(resolve)),
      (r) => delivered.push(r),
    )
    chan.request(1)
    chan.request(2)
    expect(resolvers).toHaveLength(2)

    // Out-of-order completion: the older response arrives last.
    resolvers[1]('two')
    await Promise.resolve()
    resolvers[0]('one')
    await Promise.resolve()
    expect(delivered).toEqual(['two'])
  })

  it('ignores errors from superseded requests', async () => {
    const errors: unknown[] = []
    const delivered: string[] = []
    let rejectFirst: (e: Error) => void = () => {}
    const chan = new LatestWins<number, string>(
      (n) =>
        n === 1
          ? new Promise((_, reject) => {
              rejectFirst = reject
            })
          : Promise.resolve('fresh'),
      (r) => delivered.push(r),
      (e) => errors.push(e),
    )
    chan.request(1)
    chan.request(2)
    await Promise.resolve()
    rejectFirst(new Error('stale failure'))
    await Promise.resolve()
    expect(delivered).toEqual(['fresh'])
    expect(errors).toEqual([])
  })
})
