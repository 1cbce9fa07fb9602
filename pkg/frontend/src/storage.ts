import { FormState } from './types';
import { serialize } from './state';

const KEY_PREFIX = 'transcription-form:';
const SAVE_DELAY_MS = 1500; // debounce well under the 2 s budget

export function storageKey(formId: string): string {
  return KEY_PREFIX + formId;
}

/** localStorage can be absent or throw (file:// in some browsers, privacy modes). */
export function storageAvailable(store: Storage | undefined = globalThis.localStorage): boolean {
  if (!store) return false;
  try {
    const probe = KEY_PREFIX + '__probe__';
    store.setItem(probe, '1');
    store.removeItem(probe);
    return true;
  } catch {
    return false;
  }
}

export function saveNow(state: FormState, store: Storage = globalThis.localStorage): void {
  store.setItem(storageKey(state.formId), serialize(state));
  state.lastSavedAt = Date.now();
}

export function loadSnapshot(formId: string, store: Storage = globalThis.localStorage): string | null {
  try {
    return store.getItem(storageKey(formId));
  } catch {
    return null;
  }
}

export interface Autosaver {
  /** Call on every edit; actual write happens at most SAVE_DELAY_MS later. */
  touch(): void;
  /** Write immediately (used before export and on page hide). */
  flush(): void;
}

export function makeAutosaver(
  state: FormState,
  store: Storage = globalThis.localStorage,
  delayMs: number = SAVE_DELAY_MS,
): Autosaver {
  let timer: ReturnType<typeof setTimeout> | null = null;
  const write = () => {
    timer = null;
    try {
      saveNow(state, store);
    } catch (e) {
      console.error('autosave failed', e);
    }
  };
  return {
    touch() {
      if (timer !== null) clearTimeout(timer);
      timer = setTimeout(write, delayMs);
    },
    flush() {
      if (timer !== null) clearTimeout(timer);
      write();
    },
  };
}
