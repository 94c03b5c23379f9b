// Per-pane render scheduling. Slider drags arrive much faster than the
// backend should be asked to render, so requests are debounced, and a render
// that is still running when a newer one fires gets aborted. At any moment a
// pane has at most one live request.

export type RenderTask = (signal: AbortSignal) => Promise<void>;

export interface SchedulerHooks {
  /** A change was requested; the pane content is now stale. */
  onStale?: () => void;
  /** The latest task finished and was not superseded. */
  onFresh?: () => void;
  /** The latest task failed (aborts are not errors). */
  onError?: (err: unknown) => void;
}

export const DEBOUNCE_MS = 150;

export class PaneScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private queued: RenderTask | null = null;

  constructor(
    private delayMs: number = DEBOUNCE_MS,
    private hooks: SchedulerHooks = {},
  ) {}

  /** Replace any queued task and restart the debounce window. */
  request(task: RenderTask): void {
    this.queued = task;
    this.hooks.onStale?.();
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.delayMs);
  }

  /** True while a non-aborted render is outstanding. */
  get inFlight(): boolean {
    return this.controller !== null;
  }

  private async fire(): Promise<void> {
    const task = this.queued;
    if (!task) return;
    this.queued = null;

    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      await task(controller.signal);
      if (!controller.signal.aborted) this.hooks.onFresh?.();
    } catch (err) {
      if (!controller.signal.aborted) this.hooks.onError?.(err);
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
