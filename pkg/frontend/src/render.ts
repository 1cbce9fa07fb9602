import { FormState, LineState } from './types';
import { progress, setText, toggleStatus } from './state';

export interface RenderHooks {
  /** Called after any edit; wire this to the autosaver. */
  onEdit(): void;
  onExport(): void;
}

export function showBanner(doc: Document, message: string, kind: 'error' | 'warning'): void {
  let banner = doc.getElementById('banner');
  if (!banner) {
    banner = doc.createElement('div');
    banner.id = 'banner';
    doc.body.insertBefore(banner, doc.body.firstChild);
  }
  banner.textContent = message;
  banner.setAttribute('data-kind', kind);
  banner.setAttribute(
    'style',
    `padding:.5em;margin-bottom:1em;border:1px solid;${
      kind === 'error' ? 'background:#fdd;border-color:#c00' : 'background:#ffd;border-color:#cc0'
    }`,
  );
}

export function updateProgress(doc: Document, state: FormState): void {
  const el = doc.getElementById('progress-count');
  if (!el) return;
  const { checked, total } = progress(state);
  el.textContent = `${checked}/${total} checked`;
}

function rowFor(doc: Document, lineId: string): HTMLElement | null {
  return doc.querySelector(`.line[data-line-id="${lineId}"]`);
}

function inputFor(doc: Document, lineId: string): HTMLInputElement | null {
  return doc.getElementById(`text-${lineId}`) as HTMLInputElement | null;
}

function markRow(row: HTMLElement, checked: boolean): void {
  row.style.opacity = checked ? '0.7' : '1';
  const box = row.querySelector('input[type="checkbox"]') as HTMLInputElement | null;
  if (box) box.checked = checked;
}

function focusLine(doc: Document, state: FormState, index: number): void {
  const line = state.lines[index];
  if (!line) return;
  const input = inputFor(doc, line.record.id);
  if (input) {
    input.focus();
    input.scrollIntoView({ block: 'center' });
  }
}

function wireLine(doc: Document, state: FormState, line: LineState, index: number, hooks: RenderHooks): void {
  const row = rowFor(doc, line.record.id);
  const input = inputFor(doc, line.record.id);
  if (!row || !input) return;

  input.value = line.record.text;

  const label = doc.createElement('label');
  label.style.display = 'inline-block';
  label.style.marginTop = '.2em';
  const box = doc.createElement('input');
  box.type = 'checkbox';
  box.checked = line.record.status === 'checked';
  label.appendChild(box);
  label.appendChild(doc.createTextNode(' checked'));
  row.appendChild(label);
  markRow(row, box.checked);

  const toggle = () => {
    toggleStatus(state, line.record.id);
    markRow(row, line.record.status === 'checked');
    updateProgress(doc, state);
    hooks.onEdit();
  };

  input.addEventListener('input', () => {
    setText(state, line.record.id, input.value);
    hooks.onEdit();
  });
  input.addEventListener('keydown', (ev: KeyboardEvent) => {
    if (ev.key === 'Enter') {
      ev.preventDefault();
      if (ev.ctrlKey) toggle();
      else focusLine(doc, state, index + 1);
    }
  });
  box.addEventListener('change', toggle);
}

export function renderForm(doc: Document, state: FormState, hooks: RenderHooks): void {
  const progressBar = doc.getElementById('progress');
  if (progressBar) {
    progressBar.innerHTML = '';
    const count = doc.createElement('span');
    count.id = 'progress-count';
    progressBar.appendChild(count);
    const exportBtn = doc.createElement('button');
    exportBtn.id = 'export-button';
    exportBtn.textContent = 'Export manifest';
    exportBtn.style.marginInlineStart = '1em';
    exportBtn.addEventListener('click', () => hooks.onExport());
    progressBar.appendChild(exportBtn);
    const hint = doc.createElement('span');
    hint.textContent = ' Enter: next line - Ctrl+Enter: toggle checked';
    hint.style.marginInlineStart = '1em';
    hint.style.color = '#777';
    progressBar.appendChild(hint);
  }

  if (state.lines.length === 0) {
    const root = doc.getElementById('form-root');
    if (root) root.textContent = 'No text lines were found on the scanned pages, so there is nothing to transcribe.';
  }
  state.lines.forEach((line, i) => wireLine(doc, state, line, i, hooks));
  updateProgress(doc, state);
}
