use crate::vla_stream::space::ActionSpace;

/// The system prompt: role sentence, numbered action space, output format.
pub fn render_system_prompt(space: &ActionSpace, device: &str) -> String {
    let mut out = format!(
        "You are an assistant trained to navigate the {device}. Given a task instruction, \
         a screen observation, and an action history sequence, output the next action and \
         wait for the next observation.\n\
         Here is the action space:\n"
    );
    for (i, entry) in space.entries().iter().enumerate() {
        out.push_str(&format!("{}. {}\n", i + 1, entry.readme_line()));
    }
    out.push_str(
        "Format the action as a dictionary with the following keys:\n\
         {'action': 'action_type', 'value': 'element', 'position': [x,y]}\n\
         Position represents the relative coordinates on the screenshot and should be scaled \
         to a range of 0-1.",
    );
    out
}

pub fn render_task(task: &str) -> String {
    format!("Task: {task}")
}

/// Full README prompt for `device` and `task`.
pub fn render_readme(space: &ActionSpace, device: &str, task: &str) -> String {
    format!("{}\n{}", render_system_prompt(space, device), render_task(task))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vla_stream::space::ActionSpaceEntry;

    fn numbered_lines(text: &str) -> Vec<&str> {
        text.lines()
            .filter(|l| l.split_once(". '").is_some_and(|(n, _)| n.parse::<usize>().is_ok()))
            .collect()
    }

    #[test]
    fn single_action_space() {
        let space = ActionSpace::new(
            "web",
            vec![ActionSpace::web().get("CLICK").unwrap().clone()],
        )
        .unwrap();
        let text = render_readme(&space, "web", "find flights");
        assert_eq!(numbered_lines(&text).len(), 1);
        assert!(text.contains(
            "1. 'CLICK': Click on an element, value is not applicable and the position [x,y] is required."
        ));
        assert!(text.ends_with("Task: find flights"));
    }

    #[test]
    fn mobile_space_has_eleven_lines_in_order() {
        let text = render_readme(&ActionSpace::mobile(), "mobile phone", "open settings");
        let lines = numbered_lines(&text);
        assert_eq!(lines.len(), 11);
        assert!(lines[0].starts_with("1. 'CLICK'"));
        assert!(lines[10].starts_with("11. 'STATUS TASK IMPOSSIBLE'"));
        assert!(text.contains("scaled to a range of 0-1"));
        assert!(text.starts_with("You are an assistant trained to navigate the mobile phone."));
    }

    #[test]
    fn value_hint_rendered() {
        let entry = ActionSpaceEntry {
            name: "TYPE".into(),
            description: "Type a string into an element".into(),
            requires_value: true,
            requires_position: false,
            value_hint: Some("the string to type".into()),
            device_tags: Default::default(),
        };
        assert_eq!(
            entry.readme_line(),
            "'TYPE': Type a string into an element, value is the string to type and the position [x,y] is not applicable."
        );
    }
}
