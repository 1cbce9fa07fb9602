import { beforeEach, describe, expect, it, vi } from 'vitest';

import { renderForm, showBanner, updateProgress } from '../src/render';
import { initialState } from '../src/state';
import { FormState } from '../src/types';
import { makeForm } from './helpers';

function mountDom(state: FormState): void {
  const rows = state.lines
    .map(
      (l) =>
        `<div class="line" data-line-id="${l.record.id}">` +
        `<img src="data:image/png;base64," alt="${l.record.id}">` +
        `<input type="text" dir="rtl" id="text-${l.record.id}" value="${l.record.text}">` +
        `</div>`,
    )
    .join('\n');
  document.body.innerHTML = `<div id="progress"></div><div id="form-root">${rows}</div>`;
}

const noHooks = { onEdit: () => {}, onExport: () => {} };

describe('renderForm', () => {
  let state: FormState;

  beforeEach(() => {
    state = initialState(makeForm(3));
    mountDom(state);
  });

  it('shows one row per line and the progress counter', () => {
    renderForm(document, state, noHooks);
    expect(document.querySelectorAll('.line').length).toBe(3);
    expect(document.getElementById('progress-count')!.textContent).toBe('0/3 checked');
    const inputs = document.querySelectorAll('input[type="text"]');
    inputs.forEach((el) => expect(el.getAttribute('dir')).toBe('rtl'));
  });

  it('typing updates state and reports the edit', () => {
    const onEdit = vi.fn();
    renderForm(document, state, { ...noHooks, onEdit });
    const input = document.getElementById(`text-${state.lines[0]!.record.id}`) as HTMLInputElement;
    input.value = 'اب';
    input.dispatchEvent(new Event('input'));
    expect(state.lines[0]!.record.text).toBe('اب');
    expect(onEdit).toHaveBeenCalled();
  });

  it('checkbox toggles status and refreshes the counter', () => {
    renderForm(document, state, noHooks);
    const row = document.querySelector(`.line[data-line-id="${state.lines[1]!.record.id}"]`)!;
    const box = row.querySelector('input[type="checkbox"]') as HTMLInputElement;
    box.dispatchEvent(new Event('change'));
    expect(state.lines[1]!.record.status).toBe('checked');
    expect(document.getElementById('progress-count')!.textContent).toBe('1/3 checked');
  });

  it('Enter moves focus to the next line', () => {
    renderForm(document, state, noHooks);
    const first = document.getElementById(`text-${state.lines[0]!.record.id}`) as HTMLInputElement;
    const second = document.getElementById(`text-${state.lines[1]!.record.id}`) as HTMLInputElement;
    second.scrollIntoView = () => {};
    first.dispatchEvent(new KeyboardEvent('keydown', { key: 'Enter' }));
    expect(document.activeElement).toBe(second);
  });

  it('Ctrl+Enter toggles checked on the current line', () => {
    renderForm(document, state, noHooks);
    const first = document.getElementById(`text-${state.lines[0]!.record.id}`) as HTMLInputElement;
    first.dispatchEvent(new KeyboardEvent('keydown', { key: 'Enter', ctrlKey: true }));
    expect(state.lines[0]!.record.status).toBe('checked');
  });

  it('export button invokes the export hook', () => {
    const onExport = vi.fn();
    renderForm(document, state, { ...noHooks, onExport });
    (document.getElementById('export-button') as HTMLButtonElement).click();
    expect(onExport).toHaveBeenCalledOnce();
  });

  it('empty form shows an explanatory message', () => {
    const empty = initialState(makeForm(0));
    mountDom(empty);
    renderForm(document, empty, noHooks);
    expect(document.getElementById('form-root')!.textContent).toMatch(/nothing to transcribe/);
  });
});

describe('showBanner', () => {
  it('inserts a visible banner', () => {
    document.body.innerHTML = '<div id="form-root"></div>';
    showBanner(document, 'storage unavailable', 'warning');
    const banner = document.getElementById('banner')!;
    expect(banner.textContent).toContain('storage unavailable');
    expect(banner.getAttribute('data-kind')).toBe('warning');
  });
});

describe('updateProgress', () => {
  it('is a no-op without a counter element', () => {
    document.body.innerHTML = '';
    expect(() => updateProgress(document, initialState(makeForm(1)))).not.toThrow();
  });
});
