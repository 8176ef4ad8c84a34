import type { SearchRow } from "./types.js";

/** Result rows show the institute and resolution tag so homonyms stay
 * tellable apart before selecting one. */
export function renderSearchResults(
  container: HTMLElement,
  rows: SearchRow[],
  onSelect: (authorId: number) => void,
): void {
  container.replaceChildren();
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "no-results";
    empty.textContent = "no authors found";
    container.appendChild(empty);
    return;
  }
  const list = document.createElement("ul");
  list.className = "search-results";
  for (const row of rows) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.className = "search-result";
    button.setAttribute("data-author-id", String(row.id));
    const name = document.createElement("span");
    name.className = "result-name";
    name.textContent = row.name;
    const subtitle = document.createElement("span");
    subtitle.className = "result-subtitle";
    subtitle.textContent = row.institute ? `${row.institute} (${row.case_tag})` : row.case_tag;
    button.append(name, subtitle);
    button.addEventListener("click", () => onSelect(row.id));
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}
